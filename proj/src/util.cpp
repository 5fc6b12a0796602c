#include "stoda/util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace stoda {

int thread_count() {
  if (const char* env = std::getenv("STODA_THREADS")) {
    int k = std::atoi(env);
    if (k >= 1) return k;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int nt = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
  if (nt <= 1 || n < 256) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t b = std::min(n, static_cast<std::size_t>(t) * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace stoda
