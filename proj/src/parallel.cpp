#include "erange/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "erange/errors.hpp"

namespace erange {

unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("ERANGE_THREADS")) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      if (v < 0) throw ConfigError("ERANGE_THREADS must be >= 0");
      n = static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string("ERANGE_THREADS is not an integer: ") + env);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex lock;
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        if (i < first_index) {
          first_index = i;
          first = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace erange
