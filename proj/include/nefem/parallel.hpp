#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nefem {

/// Worker count resolution: explicit request > NEFEM_THREADS > hardware.
int resolve_thread_count(int requested = 0);

/// Persistent worker pool. Work is handed out as [begin,end) chunks through
/// an atomic cursor; results must be written to disjoint locations so the
/// outcome is independent of scheduling. Reductions that must be
/// deterministic are done chunk-serially by the caller.
class ThreadPool {
 public:
  explicit ThreadPool(int n_threads = 0);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return n_threads_; }

  /// Runs fn(chunk_begin, chunk_end) across workers until n items are done.
  void parallel_chunks(std::size_t n, std::size_t chunk,
                       const std::function<void(std::size_t, std::size_t)>& fn);

 private:
  struct Impl;
  Impl* impl_;
  int n_threads_;
};

/// Process-wide pool used by assembly and the linear solver.
ThreadPool& global_pool();

/// Re-create the global pool with a new size (tests and CLI startup).
void set_global_threads(int n_threads);

}  // namespace nefem
