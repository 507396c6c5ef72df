#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace apvm {

// Worker threads used by the steppers. APVM_THREADS caps the count (0 = auto).
inline unsigned thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("APVM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
  }
  return hw;
}

// Minimal persistent pool. Tasks are indexed; every result slot is owned by a
// task index, never by a thread, so output is identical for any thread count.
class thread_pool {
 public:
  static thread_pool& instance() {
    static thread_pool pool(thread_count());
    return pool;
  }

  unsigned workers() const { return static_cast<unsigned>(threads_.size()) + 1; }

  void run(std::size_t ntasks, const std::function<void(std::size_t)>& task) {
    if (ntasks == 0) return;
    if (ntasks == 1 || threads_.empty()) {
      for (std::size_t i = 0; i < ntasks; ++i) task(i);
      return;
    }
    {
      std::unique_lock<std::mutex> lk(mu_);
      ntasks_.store(0, std::memory_order_relaxed);  // park stale workers first
      next_.store(ntasks, std::memory_order_relaxed);
      task_.store(&task, std::memory_order_release);
      pending_.store(ntasks, std::memory_order_relaxed);
      next_.store(0, std::memory_order_relaxed);
      ntasks_.store(ntasks, std::memory_order_release);
      ++generation_;
    }
    cv_.notify_all();
    work();  // calling thread participates
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [&] { return pending_.load() == 0; });
  }

  ~thread_pool() {
    {
      std::unique_lock<std::mutex> lk(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

 private:
  explicit thread_pool(unsigned n) {
    for (unsigned i = 1; i < n; ++i) threads_.emplace_back([this] { loop(); });
  }

  void loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
        seen = generation_;
        if (stop_) return;
      }
      work();
    }
  }

  void work() {
    for (;;) {
      const std::size_t limit = ntasks_.load(std::memory_order_acquire);
      std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= limit) break;
      (*task_.load(std::memory_order_acquire))(i);
      if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        std::unique_lock<std::mutex> lk(mu_);
        done_cv_.notify_all();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  std::atomic<const std::function<void(std::size_t)>*> task_{nullptr};
  std::atomic<std::size_t> ntasks_{0};
  std::atomic<std::size_t> next_{0};
  std::atomic<std::size_t> pending_{0};
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

inline void parallel_for(std::size_t ntasks, const std::function<void(std::size_t)>& task) {
  thread_pool::instance().run(ntasks, task);
}

}  // namespace apvm
