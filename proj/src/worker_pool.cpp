#include "recomb/worker_pool.hpp"

namespace recomb {

WorkerPool::WorkerPool(std::size_t workers) {
    const std::size_t extra = workers > 1 ? workers - 1 : 0;
    threads_.reserve(extra);
    for (std::size_t t = 0; t < extra; ++t) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::drain() {
    for (;;) {
        std::size_t item;
        const std::function<void(std::size_t)>* fn;
        {
            std::lock_guard lock(mutex_);
            if (next_ >= job_count_) return;
            item = next_++;
            fn = job_;
        }
        try {
            (*fn)(item);
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
            next_ = job_count_;
        }
    }
}

void WorkerPool::worker_loop() {
    std::size_t seen_epoch = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stopping_ || epoch_ != seen_epoch; });
            if (stopping_) return;
            seen_epoch = epoch_;
            ++active_;
        }
        drain();
        {
            std::lock_guard lock(mutex_);
            --active_;
        }
        done_.notify_all();
    }
}

void WorkerPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (threads_.empty() || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        job_ = &fn;
        job_count_ = count;
        next_ = 0;
        error_ = nullptr;
        ++epoch_;
    }
    wake_.notify_all();
    drain();

    std::exception_ptr error;
    {
        std::unique_lock lock(mutex_);
        done_.wait(lock, [&] { return active_ == 0 && next_ >= job_count_; });
        job_ = nullptr;
        job_count_ = 0;
        error = error_;
        error_ = nullptr;
    }
    if (error) std::rethrow_exception(error);
}

} // namespace recomb
