// Batch driver: one experiment per invocation, artifacts in the output
// directory, summary.json with a tolerance and pass flag per metric.
//
//   wwlab <subcommand> [--config file.json] [--out dir] [--jobs n] [--baseline summary.json]
//   wwlab baseline <old summary.json> <new summary.json> [--threshold 0.05] [--strict]
//
// Exit codes: 0 pass, 2 invariant violation, 3 solver failure, 64 usage or bad config.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wwlab/checks.hpp"
#include "wwlab/evolution.hpp"
#include "wwlab/io.hpp"
#include "wwlab/linear.hpp"
#include "wwlab/multi.hpp"
#include "wwlab/parallel.hpp"
#include "wwlab/solitary.hpp"

using json = nlohmann::json;
using namespace wwlab;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kViolation = 2, kSolver = 3, kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every key of every object is checked against the schema below.
struct RunConfig {
  std::string experiment = "run";
  double g = 1.0, H = 1.0;
  std::optional<double> b;
  double beta = 0.4, beta_eps = 0.1;  // used when b is absent
  double L = 128.0;
  int N = 256, Nz = 32;
  double eps = 0.1, eps1 = 0.3, eps2 = 0.1, h = 20.0;
  double ieps = 1.0, ieps0 = 0.5, ic1 = 0.9, ic2 = 1.0;  // interaction integral only
  std::optional<double> T;
  double dt = 0.05;
  double filter_strength = 36.0;
  std::vector<double> ks{0.0025, 0.005, 0.0075, 0.01, 0.0125, 0.015, 0.02, 0.03, 0.05};
  std::vector<double> times{0, 20, 40, 60, 80, 100};
  std::vector<double> hs{15, 20, 25, 30};
  int samples = 5;
  std::uint64_t seed = 1;
  double t_max = 300.0, lattice_step = 5.0;
  std::string out;

  PhysicalParams params() const {
    if (b) return PhysicalParams{g, *b, H};
    return params_from_beta(beta_eps, beta, g, H);
  }
};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw UsageError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  check_keys(j, {"experiment", "params", "grid", "eps", "eps1", "eps2", "h", "interaction", "T", "dt",
                 "filter_strength", "ks", "times", "hs", "samples", "seed", "t_max", "lattice_step", "output"},
             "config");
  take(j, "experiment", c.experiment);
  if (j.contains("params")) {
    const json& p = j.at("params");
    check_keys(p, {"g", "b", "H", "beta", "beta_eps"}, "params");
    take(p, "g", c.g);
    take(p, "H", c.H);
    take(p, "beta", c.beta);
    take(p, "beta_eps", c.beta_eps);
    if (p.contains("b")) c.b = p.at("b").get<double>();
    if (p.contains("b") && p.contains("beta")) throw UsageError("params: give either b or beta, not both");
  }
  if (j.contains("grid")) {
    const json& gr = j.at("grid");
    check_keys(gr, {"L", "N", "Nz"}, "grid");
    take(gr, "L", c.L);
    take(gr, "N", c.N);
    take(gr, "Nz", c.Nz);
  }
  take(j, "eps", c.eps);
  take(j, "eps1", c.eps1);
  take(j, "eps2", c.eps2);
  take(j, "h", c.h);
  if (j.contains("interaction")) {
    const json& in = j.at("interaction");
    check_keys(in, {"eps", "eps0", "c1", "c2"}, "interaction");
    take(in, "eps", c.ieps);
    take(in, "eps0", c.ieps0);
    take(in, "c1", c.ic1);
    take(in, "c2", c.ic2);
  }
  if (j.contains("T")) c.T = j.at("T").get<double>();
  take(j, "dt", c.dt);
  take(j, "filter_strength", c.filter_strength);
  take(j, "ks", c.ks);
  take(j, "times", c.times);
  take(j, "hs", c.hs);
  take(j, "samples", c.samples);
  take(j, "seed", c.seed);
  take(j, "t_max", c.t_max);
  take(j, "lattice_step", c.lattice_step);
  take(j, "output", c.out);
  if (!(c.L > 0.0) || c.N < 16 || c.N % 2 != 0 || c.Nz < 2) throw UsageError("grid: need L > 0, even N >= 16, Nz >= 2");
  if (!(c.dt > 0.0)) throw UsageError("dt must be positive");
  if (c.samples < 1) throw UsageError("samples must be >= 1");
  return c;
}

// Metrics with their tolerance and pass flag.
class Summary {
 public:
  explicit Summary(std::string sub) { j_ = {{"subcommand", std::move(sub)}, {"metrics", json::object()}}; }
  void less(const std::string& name, double v, double tol) { add(name, v, "<", tol, v < tol); }
  void at_most(const std::string& name, double v, double tol) { add(name, v, "<=", tol, v <= tol); }
  void greater(const std::string& name, double v, double tol) { add(name, v, ">", tol, v > tol); }
  void at_least(const std::string& name, double v, double tol) { add(name, v, ">=", tol, v >= tol); }
  void within(const std::string& name, double v, double lo, double hi) {
    add(name, v, "in", json::array({lo, hi}), v >= lo && v <= hi);
  }
  void flag(const std::string& name, bool v) { add(name, v ? 1.0 : 0.0, "==", 1.0, v); }
  void info(const std::string& name, const json& v) { j_["info"][name] = v; }
  bool pass() const {
    for (auto& m : j_["metrics"]) if (!m["pass"].get<bool>()) return false;
    return true;
  }
  json finish(const RunConfig& c) {
    j_["pass"] = pass();
    j_["experiment"] = c.experiment;
    return j_;
  }

 private:
  void add(const std::string& name, double v, const char* op, const json& tol, bool ok) {
    j_["metrics"][name] = {{"value", std::isfinite(v) ? json(v) : json(nullptr)}, {"op", op}, {"tolerance", tol},
                           {"pass", ok && std::isfinite(v)}};
  }
  json j_;
};

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// ---- experiments ----

double recentred_shape_error(const SurfaceState& a, const SurfaceState& b) {
  return x0_norm(a.grid, a.eta - b.eta, a.phi_periodic - b.phi_periodic);
}

void run_solitary(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  p.validate_wave(c.eps);
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const SolitaryWave Q = solitary_wave(dn, p, c.eps);
  const TravelingResidual r = traveling_residual(dn, Q);
  const auto [pe, pp] = parity_defect(Q);
  const Grid1D& g = Q.U.grid;
  const Vec phi = reconstruct_phi(Q.U);
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < g.N; ++j) rows.push_back({g.x(j), Q.U.eta[j], phi[j]});
  write_table_csv((out / "profile.csv").string(), {"x", "eta", "phi"}, rows);
  s.less("newton_residual", r.e0, 1e-9);
  s.less("parity_eta", pe, 1e-8);
  s.less("parity_phi", pp, 1e-8);
  s.info("c", Q.c);
  s.info("ramp_amplitude", Q.U.phi_ramp_amp);
  s.info("alpha", Q.alpha());
  s.info("beta", Q.beta());
}

void run_evolve(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  p.validate_wave(c.eps);
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const SolitaryWave Q = solitary_wave(dn, p, c.eps);
  EvolutionConfig ec;
  ec.T = c.T.value_or(10.0 / Q.c);
  ec.dt = ec.T / std::max(1.0, std::round(ec.T / c.dt));
  ec.filter_strength = c.filter_strength;
  const Trajectory tr = evolve(dn, Q.U, ec, p);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < tr.times.size(); ++i)
    rows.push_back({tr.times[i], tr.series[i].energy, tr.series[i].mass, tr.series[i].momentum});
  write_table_csv((out / "series.csv").string(), {"t", "energy", "mass", "momentum"}, rows);
  const SolitaryWave ex = translate(Q, Q.c * ec.T);
  const double e0 = tr.series.front().energy, e1 = tr.series.back().energy;
  s.less("shape_error", recentred_shape_error(tr.final_state, ex.U), 1e-5);
  s.at_most("energy_drift", std::fabs(e1 - e0) / std::fabs(e0), 1e-8);
  s.info("dt", ec.dt);
  s.info("T", ec.T);
  s.info("cfl_warning", tr.cfl_warning);
}

void run_dn_check(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  p.validate_wave(c.eps);
  const Grid1D g = make_grid(c.L, c.N);
  DirichletNeumann dn(g, p.H, DNConfig{c.Nz});
  const SolitaryWave Q = asymptotic_profile(p, g, c.eps);
  const DNCheck r = dn_check(dn, Q.U.eta, 20, c.seed);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < r.shape_steps.size(); ++i) rows.push_back({r.shape_steps[i], r.shape_errors[i]});
  write_table_csv((out / "shape_derivative.csv").string(), {"step", "relative_error"}, rows);
  s.less("flat_symbol_error", r.flat_symbol_error, 1e-8);
  s.less("constant_error", r.constant_error, 1e-12);
  s.at_most("symmetry_ratio", r.symmetry_ratio, 1e-9);
  s.at_least("shape_derivative_order", r.shape_order, 1.9);
  const DecayFit d = decay_profile(dn, Q.U.eta, Q.U.phi_periodic, Q.U.phi_ramp_amp);
  s.less("decay_rate", d.rate, 0.0);
}

TwoSolitonConfig two_soliton(const RunConfig& c, const DirichletNeumann& dn, const PhysicalParams& p) {
  p.validate_wave(c.eps1);
  p.validate_wave(c.eps2);
  return make_two_soliton(dn, p, c.eps1, c.eps2, c.h);
}

void run_residual(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const TwoSolitonConfig cfg = two_soliton(c, dn, p);
  const ResidualDecay d = decay_fit(dn, cfg, c.times, c.hs);
  std::vector<std::vector<double>> rt, rh;
  for (size_t i = 0; i < d.in_t.x.size(); ++i) rt.push_back({d.in_t.x[i], std::exp(d.in_t.y[i])});
  for (size_t i = 0; i < d.in_h.x.size(); ++i) rh.push_back({d.in_h.x[i], std::exp(d.in_h.y[i])});
  write_table_csv((out / "residual_t.csv").string(), {"t", "e0"}, rt);
  write_table_csv((out / "residual_h.csv").string(), {"h", "e0"}, rh);
  s.less("rate_t", d.in_t.rate, 0.0);
  s.less("rate_h", d.in_h.rate, 0.0);
  s.at_least("r2_t", d.in_t.r2, 0.95);
  s.at_most("rate_consistency", d.consistency, 0.3);
  s.less("four_dn_vs_defect", residual_RM(dn, cfg, 0.0).defect_check, 1e-8);
  s.info("eps0", d.eps0);
  s.info("prefactor_t", d.in_t.prefactor);
  s.info("prefactor_h", d.in_h.prefactor);
  s.info("r2_h", d.in_h.r2);
}

void run_spectrum(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  p.validate_wave(c.eps);
  const TransverseScan sc = transverse_scan(p, c.eps, c.L, c.N, c.ks);
  std::ofstream f(out / "spectrum.csv");
  f << "k,re,im,flag\n";
  f.precision(17);
  double pm = 0.0;
  for (const auto& pt : sc.points) {
    if (pt.sigma > 0.0 && pt.converged) {
      f << pt.k << "," << pt.sigma << "," << pt.imag << ",unstable\n";
      pm = std::max(pm, std::fabs(pt.sigma - pt.sigma_minus) / pt.sigma);
    } else if (pt.sigma > 0.0) {
      f << pt.k << "," << pt.sigma << "," << pt.imag << ",spurious\n";
    } else {
      f << pt.k << ",0,0,stable\n";
    }
    for (const cplx& z : pt.spurious) f << pt.k << "," << z.real() << "," << z.imag() << ",spurious\n";
  }
  s.flag("branch_exists", sc.branch_exists);
  s.flag("vanishes_beyond", sc.vanishes_beyond);
  s.at_most("sigma_k_vs_minus_k", pm, 1e-6);
  s.info("k_max_unstable", sc.k_max_unstable);
}

void run_coercivity(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  p.validate_wave(c.eps);
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const SolitaryWave Q = solitary_wave(dn, p, c.eps);
  const FourierBasis B(Q.U.grid);
  const OperatorMatrix Lc = assemble_Lc(dn, B, Q);
  const CoercivityResult r = coercivity_rayleigh(Lc, B, wave_coefficients(dn, Q));
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < r.lowest.size(); ++i) rows.push_back({static_cast<double>(i), r.lowest[i]});
  write_table_csv((out / "lowest_eigenvalues.csv").string(), {"index", "value"}, rows);
  s.greater("min_constrained", r.min_constrained, 0.0);
  s.at_most("nonpositive_unconstrained", r.nonpositive, 2);
}

Vec random_initial_data(const FourierBasis& B, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const int n = B.size();
  Vec U0(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const double k = B.xi_of(i % n);
    U0[i] = u(rng) * std::exp(-k * k);
  }
  return U0;
}

void run_lingrow(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const TwoSolitonConfig cfg = two_soliton(c, dn, p);
  const double eps0 = decay_fit(dn, cfg, c.times, c.hs).eps0;
  const double target = 1.5 * eps0 * (cfg.c2() - cfg.c1()) / 2.0;
  const double T = c.T.value_or(100.0);
  const FourierBasis B(dn.grid());
  const LMLattice lat = build_lattice(dn, B, cfg, T, c.lattice_step);
  std::ofstream f(out / "growth.csv");
  f << "sample,t,norm,E1\n";
  f.precision(17);
  double worst = -INFINITY;
  for (int i = 0; i < c.samples; ++i) {
    const GrowthResult gr = evolve_linearized_about_M(lat, B, cfg, random_initial_data(B, c.seed + i), T, c.dt);
    for (size_t k = 0; k < gr.t.size(); ++k) f << i << "," << gr.t[k] << "," << gr.norm[k] << "," << gr.E1[k] << "\n";
    worst = std::max(worst, gr.exp_rate);
  }
  s.at_most("growth_rate", worst, target);
  TwoSolitonConfig far = cfg;
  far.h = 2.0 * cfg.h;
  const double d1 = e1_drift(dn, B, cfg, 10.0).sup, d2 = e1_drift(dn, B, far, 10.0).sup;
  s.within("e1_drift_ratio", d1 / d2, 1.2, 2.8);
  s.info("eps0", eps0);
  s.info("e1_drift_h", d1);
  s.info("e1_drift_2h", d2);
}

void run_correct(const RunConfig& c, const fs::path& out, Summary& s) {
  const PhysicalParams p = c.params();
  DirichletNeumann dn(make_grid(c.L, c.N), p.H, DNConfig{c.Nz});
  const TwoSolitonConfig cfg = two_soliton(c, dn, p);
  const ResidualDecay d = decay_fit(dn, cfg, c.times, c.hs);
  const FourierBasis B(dn.grid());
  const LMLattice lat = build_lattice(dn, B, cfg, c.t_max, c.lattice_step);
  const CorrectionResult r = first_order_correction(dn, B, cfg, lat, d.eps0, c.t_max, c.dt);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < r.t.size(); ++i) rows.push_back({r.t[i], r.norm_e0[i]});
  write_table_csv((out / "correction.csv").string(), {"t", "norm_e0"}, rows);
  s.less("self_defect_resolved", r.self_defect_resolved, 1e-6);
  s.info("self_defect_all_modes", r.self_defect);
  s.at_least("decay_rate_ratio", -r.decay_rate / std::fabs(d.in_t.rate), 0.8);
  s.less("defect_ratio", r.defect_corrected / r.defect_M, 1.0);
  s.at_most("tail_estimate", r.tail_estimate, 0.1);
  s.info("delta", r.delta);
  s.info("eps0", r.eps0);
  s.info("defect_M", r.defect_M);
  s.info("defect_corrected", r.defect_corrected);
}

void run_interaction(const RunConfig& c, const fs::path& out, Summary& s) {
  std::vector<double> hs, ts;
  for (int h = 0; h <= 40; ++h) hs.push_back(h);
  for (int t = 0; t <= 100; ++t) ts.push_back(t);
  std::vector<std::vector<double>> rows;
  for (double h : hs)
    for (double t : ts) {
      const InteractionValue v = interaction_integral(c.ieps, c.ieps0, c.ic1, c.ic2, h, t);
      rows.push_back({h, t, v.lhs, v.rhs, v.ratio});
    }
  write_table_csv((out / "interaction.csv").string(), {"h", "t", "lhs", "rhs", "ratio"}, rows);
  const InteractionSup sup = interaction_sup(c.ieps, c.ieps0, c.ic1, c.ic2, hs, ts);
  s.less("C", sup.C, std::numeric_limits<double>::max());
  s.flag("monotone_in_h", sup.monotone_in_h);
  s.less("origin_error", std::fabs(interaction_integral(c.ieps, c.ieps0, c.ic1, c.ic2, 0, 0).lhs - 1.0 / c.ieps), 1e-12);
}

// ---- baseline comparison ----

struct BaselineReport {
  json diff;
  bool flagged = false;
};

BaselineReport compare(const json& a, const json& b, double threshold) {
  if (!a.contains("metrics") || !b.contains("metrics") || !a["metrics"].is_object() || !b["metrics"].is_object())
    throw std::invalid_argument("summary without a metrics object");
  if (a.value("subcommand", "") != b.value("subcommand", ""))
    throw std::invalid_argument("summaries come from different subcommands");
  BaselineReport r;
  r.diff = {{"threshold", threshold}, {"changes", json::array()}, {"structural", json::array()}};
  for (auto it = a["metrics"].begin(); it != a["metrics"].end(); ++it) {
    if (!b["metrics"].contains(it.key())) {
      r.diff["structural"].push_back({{"metric", it.key()}, {"missing_in", "new"}});
      r.flagged = true;
      continue;
    }
    const json& va = it.value()["value"];
    const json& vb = b["metrics"][it.key()]["value"];
    if (!va.is_number() || !vb.is_number()) {
      if (va != vb) {
        r.diff["changes"].push_back({{"metric", it.key()}, {"old", va}, {"new", vb}, {"flagged", true}});
        r.flagged = true;
      }
      continue;
    }
    const double x = va.get<double>(), y = vb.get<double>();
    if (x == y) continue;
    const double rel = std::fabs(y - x) / std::max(std::fabs(x), std::numeric_limits<double>::min());
    const bool f = rel > threshold;
    r.flagged = r.flagged || f;
    r.diff["changes"].push_back({{"metric", it.key()}, {"old", x}, {"new", y}, {"relative", rel}, {"flagged", f}});
  }
  for (auto it = b["metrics"].begin(); it != b["metrics"].end(); ++it)
    if (!a["metrics"].contains(it.key())) {
      r.diff["structural"].push_back({{"metric", it.key()}, {"missing_in", "old"}});
      r.flagged = true;
    }
  r.diff["flagged"] = r.flagged;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wwlab: gravity-capillary water-wave experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir, baseline_path;
  int jobs = 1;
  double threshold = 0.05;
  bool strict = false;
  std::vector<std::string> pair;

  const std::vector<std::string> names{"solitary", "evolve",   "dn-check", "residual",   "spectrum",
                                       "coercivity", "lingrow", "correct",  "interaction"};
  for (const auto& n : names) {
    auto* sc = app.add_subcommand(n);
    sc->add_option("--config", config_path, "JSON run configuration");
    sc->add_option("--out", out_dir, "output directory (default: $WWLAB_OUT, then config output, then ./out)");
    sc->add_option("--jobs", jobs, "worker cap")->check(CLI::PositiveNumber);
    sc->add_option("--baseline", baseline_path, "summary.json to compare against");
    sc->add_option("--threshold", threshold, "relative change flagged by --baseline");
    sc->add_flag("--strict", strict, "flagged baseline changes exit with 2");
  }
  auto* bl = app.add_subcommand("baseline", "compare two summary.json files");
  bl->add_option("files", pair, "old and new summary.json")->expected(2)->required();
  bl->add_option("--out", out_dir, "write baseline_diff.json here");
  bl->add_option("--threshold", threshold, "relative change that is flagged");
  bl->add_flag("--strict", strict, "flagged changes exit with 2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (bl->parsed()) {
    try {
      const BaselineReport r = compare(read_json(pair[0]), read_json(pair[1]), threshold);
      std::cout << r.diff.dump(2) << "\n";
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_json(fs::path(out_dir) / "baseline_diff.json", r.diff);
      }
      return strict && r.flagged ? kViolation : kPass;
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "schema mismatch: " << e.what() << "\n";
      return kViolation;
    }
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(read_json(config_path));
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  }
  if (out_dir.empty()) {
    if (const char* env = std::getenv("WWLAB_OUT")) out_dir = env;
  }
  if (out_dir.empty()) out_dir = cfg.out.empty() ? "out" : cfg.out;
  const fs::path out(out_dir);
  fs::create_directories(out);
  set_max_jobs(jobs);

  Summary s(sub);
  int rc = kPass;
  try {
    if (sub == "solitary") run_solitary(cfg, out, s);
    else if (sub == "evolve") run_evolve(cfg, out, s);
    else if (sub == "dn-check") run_dn_check(cfg, out, s);
    else if (sub == "residual") run_residual(cfg, out, s);
    else if (sub == "spectrum") run_spectrum(cfg, out, s);
    else if (sub == "coercivity") run_coercivity(cfg, out, s);
    else if (sub == "lingrow") run_lingrow(cfg, out, s);
    else if (sub == "correct") run_correct(cfg, out, s);
    else if (sub == "interaction") run_interaction(cfg, out, s);
    rc = s.pass() ? kPass : kViolation;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    s.info("error", e.what());
    rc = kUsage;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    s.info("error", e.what());
    s.info("last_residual", e.last_residual);
    rc = kSolver;
  } catch (const EvolutionAborted& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    s.info("error", e.what());
    s.info("aborted_at", e.t);
    rc = kSolver;
  } catch (const std::exception& e) {
    // window violations, T_max too small, poor decay data, domain errors
    std::cerr << "failure: " << e.what() << "\n";
    s.info("error", e.what());
    rc = kSolver;
  }
  json summary = s.finish(cfg);
  if (rc != kPass && rc != kViolation) summary["pass"] = false;
  write_json(out / "summary.json", summary);

  if (!baseline_path.empty()) {
    try {
      const BaselineReport r = compare(read_json(baseline_path), summary, threshold);
      write_json(out / "baseline_diff.json", r.diff);
      if (strict && r.flagged && rc == kPass) rc = kViolation;
    } catch (const std::exception& e) {
      std::cerr << "baseline: " << e.what() << "\n";
      if (rc == kPass) rc = kViolation;
    }
  }
  std::cout << summary.dump(2) << "\n";
  return rc;
}
