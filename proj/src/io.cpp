#include "wwlab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace wwlab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void put(std::ofstream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  return os;
}

}  // namespace

void write_field_csv(const std::string& path, const Grid1D& g, const Vec& f) {
  auto os = open_out(path, false);
  os << "x,value\n" << std::setprecision(17);
  for (int j = 0; j < g.N; ++j) os << g.x(j) << ',' << f[j] << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path, false);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

void write_checkpoint(const std::string& path, const Grid1D& g, const std::vector<Vec>& fields) {
  auto os = open_out(path, true);
  put(os, "WWLAB1", 6);
  const double L = g.L;
  const std::int64_t N = g.N;
  put(os, &L, 8);
  put(os, &N, 8);
  for (const auto& f : fields) {
    if (f.size() != g.N) throw InvalidArgument("checkpoint field length mismatch");
    put(os, f.data(), sizeof(double) * g.N);
  }
}

std::vector<Vec> read_checkpoint(const std::string& path, Grid1D* g) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw InvalidArgument("cannot open " + path);
  const auto size = static_cast<size_t>(is.tellg());
  is.seekg(0);
  char magic[6];
  is.read(magic, 6);
  if (size < 22 || std::memcmp(magic, "WWLAB1", 6) != 0)
    throw InvalidArgument(path + " is not a WWLAB1 checkpoint");
  double L;
  std::int64_t N;
  is.read(reinterpret_cast<char*>(&L), 8);
  is.read(reinterpret_cast<char*>(&N), 8);
  const size_t body = size - 22;
  if (N <= 0 || body % (8 * static_cast<size_t>(N)) != 0)
    throw InvalidArgument(path + ": truncated checkpoint");
  *g = make_grid(L, static_cast<int>(N));
  std::vector<Vec> out(body / (8 * N));
  for (auto& f : out) {
    f.resize(N);
    is.read(reinterpret_cast<char*>(f.data()), 8 * N);
  }
  return out;
}

}  // namespace wwlab
