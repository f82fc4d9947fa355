#include "sltr/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>

namespace sltr {

std::size_t default_thread_count() {
  if (const char* env = std::getenv("SLTR_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Executor::Batch {
  const std::function<void(std::size_t)>* fn = nullptr;
  std::size_t count = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};

  std::mutex mutex;
  std::condition_variable finished;
  std::exception_ptr error;
};

Executor::Executor(std::size_t threads) {
  const std::size_t extra = threads > 1 ? threads - 1 : 0;
  workers_.reserve(extra);
  for (std::size_t i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Executor::~Executor() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& w : workers_) w.join();
}

// Claims and runs one index; false once the batch is exhausted.
bool Executor::work_on(Batch& batch) {
  const std::size_t i = batch.next.fetch_add(1);
  if (i >= batch.count) return false;
  try {
    (*batch.fn)(i);
  } catch (...) {
    std::lock_guard lock(batch.mutex);
    if (!batch.error) batch.error = std::current_exception();
  }
  if (batch.done.fetch_add(1) + 1 == batch.count) {
    std::lock_guard lock(batch.mutex);
    batch.finished.notify_all();
  }
  return true;
}

void Executor::worker_loop() {
  for (;;) {
    std::shared_ptr<Batch> batch;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      batch = queue_.front();
      if (batch->next.load() >= batch->count) {
        queue_.pop_front();
        continue;
      }
    }
    while (work_on(*batch)) {
    }
  }
}

void Executor::run(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (workers_.empty() || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  auto batch = std::make_shared<Batch>();
  batch->fn = &fn;
  batch->count = count;
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(batch);
  }
  wake_.notify_all();

  while (work_on(*batch)) {
  }
  {
    std::lock_guard lock(mutex_);
    std::erase(queue_, batch);
  }
  {
    std::unique_lock lock(batch->mutex);
    batch->finished.wait(lock, [&] { return batch->done.load() == batch->count; });
  }
  if (batch->error) std::rethrow_exception(batch->error);
}

}  // namespace sltr
