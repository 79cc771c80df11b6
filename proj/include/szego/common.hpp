#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace szego {

using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Raised when a configuration or call violates a documented precondition.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an adaptive computation exhausts its budget before reaching
/// the requested tolerance. Carries the best value and the achieved error.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double best_value, double achieved_error)
        : std::runtime_error(what), best_value_(best_value), achieved_error_(achieved_error) {}

    double best_value() const noexcept { return best_value_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double best_value_;
    double achieved_error_;
};

/// Raised when a dense computation would exceed its memory or work cap.
class ResourceCap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// handed out by static striding, so each index is processed by exactly one
/// call and callers that write into slot i get thread-count independent output.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body)
{
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace szego
