#include "nefem/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace nefem {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NEFEM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct ThreadPool::Impl {
  std::vector<std::thread> workers;
  std::mutex mtx;
  std::condition_variable cv_work;
  std::condition_variable cv_done;
  const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
  std::atomic<std::size_t> cursor{0};
  std::size_t total = 0;
  std::size_t chunk = 1;
  std::size_t generation = 0;
  int active = 0;
  bool stop = false;

  void worker_loop() {
    std::size_t seen_gen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(mtx);
        cv_work.wait(lk, [&] { return stop || generation != seen_gen; });
        if (stop) return;
        seen_gen = generation;
      }
      run_chunks();
      {
        std::lock_guard<std::mutex> lk(mtx);
        if (--active == 0) cv_done.notify_all();
      }
    }
  }

  void run_chunks() {
    for (;;) {
      const std::size_t begin = cursor.fetch_add(chunk);
      if (begin >= total) break;
      const std::size_t end = begin + chunk < total ? begin + chunk : total;
      (*fn)(begin, end);
    }
  }
};

ThreadPool::ThreadPool(int n_threads)
    : impl_(new Impl), n_threads_(resolve_thread_count(n_threads)) {
  for (int i = 0; i < n_threads_ - 1; ++i) {
    impl_->workers.emplace_back([this] { impl_->worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lk(impl_->mtx);
    impl_->stop = true;
  }
  impl_->cv_work.notify_all();
  for (auto& w : impl_->workers) w.join();
  delete impl_;
}

void ThreadPool::parallel_chunks(
    std::size_t n, std::size_t chunk,
    const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (n_threads_ == 1 || n <= chunk) {
    fn(0, n);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(impl_->mtx);
    impl_->fn = &fn;
    impl_->cursor.store(0);
    impl_->total = n;
    impl_->chunk = chunk;
    impl_->active = static_cast<int>(impl_->workers.size());
    ++impl_->generation;
  }
  impl_->cv_work.notify_all();
  impl_->run_chunks();  // caller participates
  std::unique_lock<std::mutex> lk(impl_->mtx);
  impl_->cv_done.wait(lk, [&] { return impl_->active == 0; });
}

namespace {
ThreadPool* g_pool = nullptr;
std::mutex g_pool_mtx;
}  // namespace

ThreadPool& global_pool() {
  std::lock_guard<std::mutex> lk(g_pool_mtx);
  if (!g_pool) g_pool = new ThreadPool();
  return *g_pool;
}

void set_global_threads(int n_threads) {
  std::lock_guard<std::mutex> lk(g_pool_mtx);
  delete g_pool;
  g_pool = new ThreadPool(n_threads);
}

}  // namespace nefem
