#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace sltr {

/// Thread count from SLTR_THREADS, falling back to the hardware concurrency.
std::size_t default_thread_count();

/// Fork-join pool. `run` blocks until every index has been processed; the
/// calling thread works on its own batch while it waits, so nested `run`
/// calls from inside a task cannot deadlock. Tasks must write to disjoint
/// outputs; the pool imposes no ordering between indices.
class Executor {
 public:
  /// threads counts the caller, so Executor(1) spawns no workers.
  explicit Executor(std::size_t threads);
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  std::size_t concurrency() const noexcept { return workers_.size() + 1; }

  /// Calls fn(i) for i in [0, count). Rethrows the first task exception.
  void run(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  struct Batch;

  void worker_loop();
  static bool work_on(Batch& batch);

  std::vector<std::thread> workers_;
  std::deque<std::shared_ptr<Batch>> queue_;
  std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
};

}  // namespace sltr
