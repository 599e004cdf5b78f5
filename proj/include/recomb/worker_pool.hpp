#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace recomb {

// Fixed set of threads running index-parallel loops. The calling thread takes
// part, so a pool of size 1 owns no threads at all. Item-to-thread assignment
// is dynamic; callers write results into pre-assigned slots, so output never
// depends on scheduling.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return threads_.size() + 1; }

    // Runs fn(0) .. fn(count - 1) and returns once all have finished. The first
    // exception thrown by any item is rethrown here.
    void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

private:
    void worker_loop();
    void drain();

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;

    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t job_count_ = 0;
    std::size_t next_ = 0;
    std::size_t active_ = 0;
    std::size_t epoch_ = 0;
    bool stopping_ = false;
    std::exception_ptr error_;
};

} // namespace recomb
