#pragma once

// Deterministic chunked reduction.
//
// The index range [0, count) is cut into fixed chunks of kReduceChunk terms.
// Each chunk is summed sequentially with Neumaier compensation, and chunk
// partials are combined by a fixed pairwise tree. Worker threads only decide
// which chunk is computed where, never the order of additions, so the result
// is bit-identical for every thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace padicmv {

inline constexpr std::size_t kReduceChunk = 1024;

/// Neumaier (improved Kahan-Babuska) running sum for a real type.
template <class Real>
class NeumaierSum {
public:
    void add(Real x) {
        const Real t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void merge(const NeumaierSum& o) {
        add(o.sum_);
        add(o.comp_);
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_{0};
    Real comp_{0};
};

/// Componentwise Neumaier sum for complex values.
template <class Real>
class NeumaierComplexSum {
public:
    void add(const std::complex<Real>& z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    void merge(const NeumaierComplexSum& o) {
        re_.merge(o.re_);
        im_.merge(o.im_);
    }
    std::complex<Real> value() const { return {re_.value(), im_.value()}; }

private:
    NeumaierSum<Real> re_;
    NeumaierSum<Real> im_;
};

/// Runs `fn(chunk_index)` for every chunk in [0, chunks) on up to `threads`
/// workers. The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) fn(c);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next = chunks;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Reduces [0, count) where `fill(begin, end, acc)` adds the terms of one
/// chunk into accumulator `acc` (a NeumaierSum or NeumaierComplexSum).
template <class Acc, class Fill>
Acc deterministic_reduce(std::uint64_t count, unsigned threads, Fill&& fill) {
    const std::size_t chunks = static_cast<std::size_t>((count + kReduceChunk - 1) / kReduceChunk);
    if (chunks == 0) return Acc{};
    std::vector<Acc> partial(chunks);
    parallel_chunks(chunks, threads, [&](std::size_t c) {
        const std::uint64_t begin = c * kReduceChunk;
        const std::uint64_t end = std::min<std::uint64_t>(count, begin + kReduceChunk);
        fill(begin, end, partial[c]);
    });
    // Fixed pairwise tree: (0,1),(2,3),... then repeat on the survivors.
    for (std::size_t stride = 1; stride < chunks; stride *= 2) {
        for (std::size_t i = 0; i + stride < chunks; i += 2 * stride) {
            partial[i].merge(partial[i + stride]);
        }
    }
    return partial[0];
}

}  // namespace padicmv
