#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace polaron::par {

// POLARON_SPECTRA_THREADS overrides hardware concurrency; always >= 1.
inline std::size_t thread_count() {
    if (const char* env = std::getenv("POLARON_SPECTRA_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {

inline bool& inside_worker() {
    thread_local bool flag = false;
    return flag;
}

// Persistent worker pool. Spawning threads per call is far too slow for the
// propagation loops, which dispatch small parallel regions millions of times;
// the workers here idle on a condition variable between regions instead.
// Tasks are claimed from a shared counter, so load balances dynamically; every
// index is still written by exactly one task, which keeps results identical
// for any worker count.
class Pool {
  public:
    static Pool& instance() {
        static Pool p;
        return p;
    }

    // Executes task(0..tasks-1) across the workers, returning when all done.
    // task must not throw; callers wrap bodies and carry exceptions out.
    void run(std::size_t tasks, const std::function<void(std::size_t)>& task) {
        std::scoped_lock serialize(run_gate_);
        {
            std::unique_lock<std::mutex> lk(m_);
            task_ = &task;
            tasks_ = tasks;
            next_ = 0;
            done_ = 0;
            ++generation_;
            cv_work_.notify_all();
            cv_done_.wait(lk, [&] { return done_ == tasks_; });
            task_ = nullptr;
        }
    }

    Pool(const Pool&) = delete;
    Pool& operator=(const Pool&) = delete;

  private:
    Pool() {
        const unsigned hw = std::thread::hardware_concurrency();
        const std::size_t n = hw ? hw : 1;
        workers_.reserve(n);
        for (std::size_t k = 0; k < n; ++k) workers_.emplace_back([this] { work(); });
    }
    ~Pool() {
        {
            std::scoped_lock lk(m_);
            stop_ = true;
            cv_work_.notify_all();
        }
        for (auto& t : workers_) t.join();
    }

    void work() {
        inside_worker() = true;
        std::unique_lock<std::mutex> lk(m_);
        std::uint64_t seen = 0;
        for (;;) {
            cv_work_.wait(lk, [&] {
                return stop_ || (task_ != nullptr && generation_ != seen && next_ < tasks_);
            });
            if (stop_) return;
            seen = generation_;
            while (next_ < tasks_) {
                const std::size_t id = next_++;
                lk.unlock();
                (*task_)(id);
                lk.lock();
                if (++done_ == tasks_) cv_done_.notify_all();
            }
        }
    }

    std::mutex run_gate_;
    std::mutex m_;
    std::condition_variable cv_work_, cv_done_;
    std::vector<std::thread> workers_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t tasks_ = 0, next_ = 0, done_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

}  // namespace detail

// Static block partition over [0, n); each index is touched by exactly one
// task, so results are bit-identical for any thread count as long as body(i)
// only writes to slot i. Tasks outnumber workers a little so uneven rows
// still balance. Regions never nest: a body that calls parallel_for runs the
// inner region inline.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t nt = std::min(thread_count(), n);
    if (nt <= 1 || detail::inside_worker()) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t tasks = std::min(n, 4 * nt);
    std::vector<std::exception_ptr> errors(tasks);
    const std::function<void(std::size_t)> task = [&](std::size_t k) {
        const std::size_t lo = n * k / tasks;
        const std::size_t hi = n * (k + 1) / tasks;
        try {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };
    detail::Pool::instance().run(tasks, task);
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace polaron::par
