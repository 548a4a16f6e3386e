#include "wwlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wwlab {

namespace {
std::atomic<int> g_jobs{1};
}

void set_max_jobs(int n) { g_jobs = n < 1 ? 1 : n; }
int max_jobs() { return g_jobs; }

void parallel_for(int n, const std::function<void(int)>& f) {
  const int workers = std::min(max_jobs(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  auto run = [&] {
    for (;;) {
      const int i = next++;
      if (i >= n) return;
      {
        std::lock_guard<std::mutex> lk(m);
        if (err) return;
      }
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace wwlab
