#pragma once

// Exact prime counting at many points with a single segmented sweep.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "pikn/error.hpp"
#include "pikn/options.hpp"
#include "pikn/sieve.hpp"

namespace pikn {

/// values[k-1] = pi(k*n) for k = 1..K.
struct PiSequence {
    std::uint64_t n = 1;
    std::uint64_t K = 0;
    std::vector<std::uint64_t> values;

    /// pi(k*n) for k in [0, K], with pi(0) = 0.
    std::uint64_t at(std::uint64_t k) const {
        if (k > K) throw DomainError("PiSequence::at: k beyond K");
        return k == 0 ? 0 : values[k - 1];
    }

    /// pi(K*n), the X of a truncation.
    std::uint64_t last() const { return at(K); }
};

namespace detail {

// Walks [0, points(count-1)] once and reports pi at each non-decreasing point.
template <class PointOf, class Emit>
bool pi_walk(std::uint64_t count, PointOf&& point_of, Emit&& emit, const SieveOptions& opts) {
    if (count == 0) return true;
    const std::uint64_t top = point_of(count - 1);
    if (top == UINT64_MAX) throw OverflowError("pi: argument 2^64-1 is not supported");
    std::uint64_t running = 0, i = 0, next = point_of(0);
    return sweep(0, top + 1, opts, [&](const PrimeTable& t) {
        std::uint64_t pos = t.lo();
        while (i < count && next < t.hi()) {
            running += t.count_range(pos, next + 1);
            pos = next + 1;
            if constexpr (std::is_same_v<std::invoke_result_t<Emit&, std::uint64_t, std::uint64_t>, bool>) {
                if (!emit(i, running)) return false;
            } else {
                emit(i, running);
            }
            if (++i < count) next = point_of(i);
        }
        running += t.count_range(pos, t.hi());
        return i < count;
    }) || i == count;
}

inline void check_multiples(std::uint64_t n, std::uint64_t K) {
    if (n == 0) throw DomainError("n must be >= 1");
    if (K == 0) throw DomainError("K must be >= 1");
    if (K > (UINT64_MAX - 1) / n) throw OverflowError("K*n exceeds 64 bits");
}

}  // namespace detail

/// Number of primes <= x, by a fresh segmented sweep.
inline std::uint64_t pi(std::uint64_t x, const SieveOptions& opts = {}) {
    std::uint64_t result = 0;
    const std::uint64_t point = x;
    detail::pi_walk(1, [&](std::uint64_t) { return point; },
                    [&](std::uint64_t, std::uint64_t c) { result = c; }, opts);
    return result;
}

/// Streams (k, pi(k*n)) for k = 1..K in order without storing the sequence.
/// f may return bool; false stops the sweep. Returns false if stopped early.
template <class F>
bool for_each_pi_at_multiples(std::uint64_t n, std::uint64_t K, const SieveOptions& opts, F&& f) {
    detail::check_multiples(n, K);
    return detail::pi_walk(
        K, [n](std::uint64_t i) { return (i + 1) * n; },
        [&](std::uint64_t i, std::uint64_t c) {
            if constexpr (std::is_same_v<std::invoke_result_t<F&, std::uint64_t, std::uint64_t>, bool>) {
                return f(i + 1, c);
            } else {
                f(i + 1, c);
                return true;
            }
        },
        opts);
}

/// pi(n), pi(2n), ..., pi(Kn) from one sweep over [0, Kn].
inline PiSequence pi_at_multiples(std::uint64_t n, std::uint64_t K, const SieveOptions& opts = {}) {
    detail::check_multiples(n, K);
    const std::uint64_t bytes = K > UINT64_MAX / 8 ? UINT64_MAX : K * 8;
    if (bytes > opts.memory_budget)
        throw BudgetError("pi_at_multiples: value vector too large, reduce K or stream", bytes,
                          opts.memory_budget);
    PiSequence seq{n, K, {}};
    seq.values.reserve(K);
    for_each_pi_at_multiples(n, K, opts, [&](std::uint64_t, std::uint64_t c) { seq.values.push_back(c); });
    return seq;
}

/// pi(kn) - pi((k-1)n): primes in ((k-1)n, kn].
inline std::uint64_t pi_gap(const PiSequence& seq, std::uint64_t k) {
    if (k == 0 || k > seq.K)
        throw DomainError("pi_gap: k=" + std::to_string(k) + " outside [1, " + std::to_string(seq.K) + "]");
    return seq.at(k) - seq.at(k - 1);
}

/// pi at each of the given non-decreasing points, from one sweep.
inline std::vector<std::uint64_t> pi_at_points(std::span<const std::uint64_t> points,
                                               const SieveOptions& opts = {}) {
    if (!std::is_sorted(points.begin(), points.end()))
        throw DomainError("pi_at_points: points must be non-decreasing");
    std::vector<std::uint64_t> out(points.size());
    detail::pi_walk(
        points.size(), [&](std::uint64_t i) { return points[i]; },
        [&](std::uint64_t i, std::uint64_t c) { out[i] = c; }, opts);
    return out;
}

/// Constant-time pi(x) and primality for x <= limit: a prime table over
/// [0, limit] plus prefix counts every 512 odd numbers.
class PiIndex {
public:
    explicit PiIndex(std::uint64_t limit, const SieveOptions& opts = {}) : limit_(limit) {
        if (limit == UINT64_MAX) throw OverflowError("PiIndex: limit must be < 2^64-1");
        const std::uint64_t table_bytes = detail::table_bytes(0, limit + 1);
        const std::uint64_t prefix_bytes = (table_bytes / 64 + 1) * 8;
        if (table_bytes + prefix_bytes > opts.memory_budget)
            throw BudgetError("PiIndex up to " + std::to_string(limit), table_bytes + prefix_bytes,
                              opts.memory_budget);
        SieveOptions inner = opts;
        inner.memory_budget = opts.memory_budget - prefix_bytes;
        table_ = sieve_range(0, limit + 1, inner);
        auto w = table_.words();
        prefix_.resize(w.size() / kBlockWords + 1);
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i % kBlockWords == 0) prefix_[i / kBlockWords] = c;
            c += static_cast<std::uint64_t>(std::popcount(w[i]));
        }
    }

    std::uint64_t limit() const noexcept { return limit_; }

    std::uint64_t pi(std::uint64_t x) const {
        if (x > limit_) throw DomainError("PiIndex::pi: x beyond index limit");
        if (x < 2) return 0;
        // odd numbers <= x occupy bits [0, (x+1)/2); bit 0 is 1, never set
        const std::uint64_t bits = (x + 1) / 2;
        const std::uint64_t block = bits / (64 * kBlockWords);
        auto w = table_.words();
        return 1 + prefix_[block] + detail::popcount_bits(w, block * 64 * kBlockWords, bits);
    }

    bool is_prime(std::uint64_t x) const {
        if (x > limit_) throw DomainError("PiIndex::is_prime: x beyond index limit");
        return table_.test(x);
    }

    const PrimeTable& table() const noexcept { return table_; }

private:
    static constexpr std::uint64_t kBlockWords = 8;
    std::uint64_t limit_;
    PrimeTable table_;
    std::vector<std::uint64_t> prefix_;
};

}  // namespace pikn
