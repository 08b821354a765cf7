#include "panolayout/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace panolayout {

namespace {

std::atomic<unsigned> g_max_threads{0};

unsigned hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

void set_max_threads(unsigned count) { g_max_threads.store(count); }

unsigned max_threads() {
  const unsigned cap = g_max_threads.load();
  return cap == 0 ? hardware_threads() : cap;
}

void parallel_for_rows(std::size_t rows,
                       const std::function<void(std::size_t, std::size_t)>& body,
                       std::size_t min_rows_per_task) {
  if (rows == 0) return;
  min_rows_per_task = std::max<std::size_t>(min_rows_per_task, 1);
  const std::size_t by_work = (rows + min_rows_per_task - 1) / min_rows_per_task;
  const std::size_t workers = std::min<std::size_t>(max_threads(), by_work);
  if (workers <= 1) {
    body(0, rows);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers - 1);
  const std::size_t chunk = rows / workers;
  const std::size_t extra = rows % workers;
  std::size_t begin = 0;
  std::size_t first_end = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    if (w == 0) {
      first_end = end;
    } else {
      pool.emplace_back([&, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    begin = end;
  }
  try {
    body(0, first_end);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace panolayout
