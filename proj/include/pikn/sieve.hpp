#pragma once

// Odd-only, bit-packed segmented sieve of Eratosthenes plus a deterministic
// Miller-Rabin test for arbitrary 64-bit inputs.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "pikn/error.hpp"
#include "pikn/options.hpp"

namespace pikn {

/// pi(2^64 - 1); p_k does not fit in 64 bits beyond this index.
inline constexpr std::uint64_t kPrimeCountU64 = 425656284035217743ULL;

namespace detail {

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && (r > UINT32_MAX || r * r > n)) --r;
    while (r < UINT32_MAX && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Smallest r with r*r >= n.
inline std::uint64_t ceil_sqrt(std::uint64_t n) {
    auto r = isqrt(n);
    return (static_cast<unsigned __int128>(r) * r == n) ? r : r + 1;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline std::uint64_t words_for_bits(std::uint64_t bits) { return (bits + 63) / 64; }

/// Number of odd integers in [lo, hi).
inline std::uint64_t odd_count(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t first = lo | 1;
    if (hi <= lo || first >= hi || first < lo) return 0;
    return (hi - first + 1) / 2;
}

/// Set bits in [from, to) of a packed word array.
inline std::uint64_t popcount_bits(std::span<const std::uint64_t> words, std::uint64_t from,
                                   std::uint64_t to) {
    if (from >= to) return 0;
    std::uint64_t wa = from / 64, wb = to / 64;
    unsigned ba = from % 64, bb = to % 64;
    if (wa == wb) {
        std::uint64_t mask = (~std::uint64_t{0} << ba) & ((std::uint64_t{1} << bb) - 1);
        return static_cast<std::uint64_t>(std::popcount(words[wa] & mask));
    }
    std::uint64_t c = static_cast<std::uint64_t>(std::popcount(words[wa] & (~std::uint64_t{0} << ba)));
    for (std::uint64_t w = wa + 1; w < wb; ++w) c += static_cast<std::uint64_t>(std::popcount(words[w]));
    if (bb != 0) c += static_cast<std::uint64_t>(std::popcount(words[wb] & ((std::uint64_t{1} << bb) - 1)));
    return c;
}

/// Sieves the odd numbers of [lo, hi) into `words` (bit i <-> (lo|1) + 2i).
/// `base` must hold every odd prime p with p*p < hi, ascending.
inline void sieve_odd_bits(std::uint64_t lo, std::uint64_t hi, std::span<std::uint64_t> words,
                           std::span<const std::uint32_t> base) {
    const std::uint64_t nodd = odd_count(lo, hi);
    const std::uint64_t nwords = words_for_bits(nodd);
    std::fill_n(words.begin(), nwords, ~std::uint64_t{0});
    if (nodd == 0) return;
    if (nodd % 64 != 0) words[nwords - 1] = (std::uint64_t{1} << (nodd % 64)) - 1;
    const std::uint64_t first = lo | 1;
    if (first == 1) words[0] &= ~std::uint64_t{1};

    for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        const std::uint64_t pp = p * p;
        if (pp >= hi) break;
        std::uint64_t start;
        if (pp >= lo) {
            start = pp;
        } else {
            std::uint64_t r = lo % p;
            std::uint64_t off = r == 0 ? 0 : p - r;
            if (lo > UINT64_MAX - off) continue;
            start = lo + off;
        }
        if (start >= hi) continue;
        if ((start & 1) == 0) {
            if (start > UINT64_MAX - p) continue;
            start += p;
            if (start >= hi) continue;
        }
        for (std::uint64_t i = (start - first) / 2; i < nodd; i += p)
            words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
    }
}

inline std::uint64_t base_primes_bytes(std::uint64_t bound) {
    // sieve bytes plus a generous estimate of the stored primes
    return bound / 2 + 1 + 4 * (bound / 5 + 16);
}

}  // namespace detail

/// Odd primes up to `bound` inclusive (bound <= 2^32), ascending.
inline std::vector<std::uint32_t> odd_primes_upto(std::uint64_t bound,
                                                  std::uint64_t memory_budget = default_memory_budget()) {
    if (bound > (std::uint64_t{1} << 32))
        throw DomainError("base prime bound exceeds 2^32: " + std::to_string(bound));
    if (detail::base_primes_bytes(bound) > memory_budget)
        throw BudgetError("base primes up to " + std::to_string(bound),
                          detail::base_primes_bytes(bound), memory_budget);
    std::vector<std::uint32_t> primes;
    if (bound < 3) return primes;
    // composite[i] <-> 2i+1
    std::vector<std::uint8_t> composite(bound / 2 + 1, 0);
    for (std::uint64_t i = 1; 2 * i + 1 <= bound; ++i) {
        if (composite[i]) continue;
        std::uint64_t p = 2 * i + 1;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = p * p / 2; j < composite.size() && 2 * j + 1 <= bound; j += p)
            composite[j] = 1;
    }
    return primes;
}

/// Deterministic primality for every 64-bit n (strong pseudoprime test to the
/// seven Sinclair bases, which has no composite passes below 2^64).
inline bool is_prime(std::uint64_t n) {
    constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (std::uint64_t p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;

    const std::uint64_t d = (n - 1) >> std::countr_zero(n - 1);
    const int s = std::countr_zero(n - 1);
    constexpr std::uint64_t bases[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    for (std::uint64_t a : bases) {
        a %= n;
        if (a == 0) continue;
        std::uint64_t x = detail::pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// Exact primality of every integer in [lo, hi). Only odd numbers are stored;
/// 2 is answered arithmetically. Immutable after construction.
class PrimeTable {
public:
    PrimeTable() = default;

    /// Takes ownership of odd-only bits as produced by detail::sieve_odd_bits.
    PrimeTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words)
        : lo_(lo), hi_(hi), first_odd_(lo | 1), odd_count_(detail::odd_count(lo, hi)),
          words_(std::move(words)) {
        if (words_.size() < detail::words_for_bits(odd_count_))
            throw DomainError("PrimeTable: bit storage shorter than the range");
    }

    std::uint64_t lo() const noexcept { return lo_; }
    std::uint64_t hi() const noexcept { return hi_; }
    std::uint64_t size() const noexcept { return hi_ - lo_; }
    std::span<const std::uint64_t> words() const noexcept {
        return {words_.data(), detail::words_for_bits(odd_count_)};
    }

    bool contains_two() const noexcept { return lo_ <= 2 && 2 < hi_; }

    /// Primality of x; x must lie in [lo, hi).
    bool test(std::uint64_t x) const {
        if (x < lo_ || x >= hi_) throw DomainError("PrimeTable::test: value outside table");
        if ((x & 1) == 0) return x == 2;
        std::uint64_t i = (x - first_odd_) / 2;
        return (words_[i / 64] >> (i % 64)) & 1;
    }

    std::uint64_t count() const { return count_range(lo_, hi_); }

    /// Primes in [a, b) intersected with [lo, hi).
    std::uint64_t count_range(std::uint64_t a, std::uint64_t b) const {
        a = std::max(a, lo_);
        b = std::min(b, hi_);
        if (a >= b) return 0;
        std::uint64_t c = (a <= 2 && 2 < b) ? 1 : 0;
        return c + detail::popcount_bits(words(), odd_index_ceil(a), odd_index_ceil(b));
    }

    /// Calls f(p) for each prime in the table, ascending. If f returns bool,
    /// false stops the scan; the return value says whether the scan completed.
    template <class F>
    bool for_each_prime(F&& f) const {
        return for_each_prime_from(lo_, std::forward<F>(f));
    }

    template <class F>
    bool for_each_prime_from(std::uint64_t from, F&& f) const {
        constexpr bool stoppable = std::is_same_v<std::invoke_result_t<F&, std::uint64_t>, bool>;
        from = std::max(from, lo_);
        if (from <= 2 && contains_two()) {
            if constexpr (stoppable) {
                if (!f(std::uint64_t{2})) return false;
            } else {
                f(std::uint64_t{2});
            }
        }
        auto w = words();
        std::uint64_t begin = odd_index_ceil(std::min(from, hi_));
        for (std::uint64_t wi = begin / 64; wi < w.size(); ++wi) {
            std::uint64_t bits = w[wi];
            if (wi == begin / 64) bits &= ~std::uint64_t{0} << (begin % 64);
            while (bits) {
                std::uint64_t i = wi * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
                bits &= bits - 1;
                std::uint64_t p = first_odd_ + 2 * i;
                if constexpr (stoppable) {
                    if (!f(p)) return false;
                } else {
                    f(p);
                }
            }
        }
        return true;
    }

    friend bool operator==(const PrimeTable& a, const PrimeTable& b) {
        if (a.lo_ != b.lo_ || a.hi_ != b.hi_) return false;
        auto wa = a.words(), wb = b.words();
        return std::equal(wa.begin(), wa.end(), wb.begin(), wb.end());
    }

private:
    // index of the first odd number >= x, clamped to the odd count
    std::uint64_t odd_index_ceil(std::uint64_t x) const {
        if (x <= first_odd_) return 0;
        return std::min(odd_count_, (x - first_odd_ + 1) / 2);
    }

    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::uint64_t first_odd_ = 1;
    std::uint64_t odd_count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Tiling of [span_lo, span_hi) into consecutive segments.
struct SegmentPlan {
    std::uint64_t span_lo = 0;
    std::uint64_t span_hi = 0;
    std::uint64_t segment_size = 1;
    std::uint64_t base_primes_bound = 0;

    static SegmentPlan make(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size) {
        if (hi <= lo) throw DomainError("SegmentPlan: empty span");
        if (segment_size == 0) throw DomainError("SegmentPlan: segment_size must be positive");
        return {lo, hi, segment_size, detail::ceil_sqrt(hi)};
    }

    std::uint64_t segment_count() const {
        std::uint64_t len = span_hi - span_lo;
        return len / segment_size + (len % segment_size != 0);
    }

    /// [a, b) of segment i.
    std::pair<std::uint64_t, std::uint64_t> segment(std::uint64_t i) const {
        std::uint64_t a = span_lo + i * segment_size;
        std::uint64_t b = (span_hi - a > segment_size) ? a + segment_size : span_hi;
        return {a, b};
    }
};

namespace detail {

inline std::uint64_t table_bytes(std::uint64_t lo, std::uint64_t hi) {
    return words_for_bits(odd_count(lo, hi)) * 8;
}

inline PrimeTable sieve_segment(std::uint64_t lo, std::uint64_t hi,
                                std::span<const std::uint32_t> base) {
    std::vector<std::uint64_t> words(words_for_bits(odd_count(lo, hi)));
    sieve_odd_bits(lo, hi, words, base);
    return PrimeTable(lo, hi, std::move(words));
}

inline unsigned worker_count(const SieveOptions& opts) { return std::max(1u, opts.threads); }

}  // namespace detail

/// Primality bits for [lo, hi) in one table.
/// Throws BudgetError when the table would exceed the memory budget; sweep
/// the range segment by segment instead.
inline PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {}) {
    if (hi <= lo) throw DomainError("sieve_range: need lo < hi");
    const std::uint64_t bytes = detail::table_bytes(lo, hi);
    if (bytes > opts.memory_budget)
        throw BudgetError("sieve_range: table too large, use a segmented sweep", bytes,
                          opts.memory_budget);
    auto base = odd_primes_upto(detail::ceil_sqrt(hi), opts.memory_budget - bytes);

    // Segment starts stay 128-aligned relative to lo so each segment owns whole words.
    std::uint64_t seg = std::max<std::uint64_t>(128, (opts.segment_size + 127) / 128 * 128);
    auto plan = SegmentPlan::make(lo, hi, seg);
    std::vector<std::uint64_t> words(detail::words_for_bits(detail::odd_count(lo, hi)));

    auto fill = [&](std::uint64_t i) {
        auto [a, b] = plan.segment(i);
        std::uint64_t w0 = (a - lo) / 128;
        std::uint64_t nw = detail::words_for_bits(detail::odd_count(a, b));
        detail::sieve_odd_bits(a, b, std::span(words).subspan(w0, nw), base);
    };
    const std::uint64_t nseg = plan.segment_count();
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(detail::worker_count(opts), nseg));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < nseg; ++i) fill(i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t i = t; i < nseg; i += workers) fill(i);
            });
    }
    return PrimeTable(lo, hi, std::move(words));
}

/// Sieves [lo, hi) segment by segment and hands each PrimeTable to
/// `consume` in increasing order. Segments are sieved concurrently in batches
/// of opts.threads; delivery order never depends on scheduling. `consume`
/// returns false to stop early. Returns false if stopped.
template <class Consumer>
bool sweep(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, Consumer&& consume) {
    if (hi <= lo) return true;
    auto plan = SegmentPlan::make(lo, hi, opts.segment_size);
    const unsigned workers = detail::worker_count(opts);
    const std::uint64_t seg_bytes = detail::table_bytes(0, std::min(plan.segment_size, hi - lo));
    const std::uint64_t live = seg_bytes * workers;
    if (live > opts.memory_budget)
        throw BudgetError("sweep: segments do not fit", live, opts.memory_budget);
    const auto base = odd_primes_upto(plan.base_primes_bound, opts.memory_budget - live);

    const std::uint64_t nseg = plan.segment_count();
    std::vector<PrimeTable> batch;
    for (std::uint64_t i = 0; i < nseg; i += workers) {
        const std::uint64_t n = std::min<std::uint64_t>(workers, nseg - i);
        batch.assign(n, PrimeTable{});
        if (n == 1) {
            auto [a, b] = plan.segment(i);
            batch[0] = detail::sieve_segment(a, b, base);
        } else {
            std::vector<std::jthread> pool;
            for (std::uint64_t t = 0; t < n; ++t)
                pool.emplace_back([&, t] {
                    auto [a, b] = plan.segment(i + t);
                    batch[t] = detail::sieve_segment(a, b, base);
                });
        }
        for (const auto& table : batch)
            if (!consume(table)) return false;
    }
    return true;
}

/// Calls f(p) for every prime in [lo, hi), ascending. f may return bool to stop.
template <class F>
bool for_each_prime(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, F&& f) {
    return sweep(lo, hi, opts, [&](const PrimeTable& t) { return t.for_each_prime(f); });
}

/// Unbounded ascending producer of primes >= lo. Windows are sieved lazily;
/// far beyond the reach of an in-budget base-prime table it falls back to
/// testing candidates with is_prime.
class PrimeStream {
public:
    explicit PrimeStream(std::uint64_t lo = 0, SieveOptions opts = {})
        : next_lo_(lo), opts_(opts) {}

    /// Next prime, or nullopt once the 64-bit range is exhausted.
    std::optional<std::uint64_t> next() {
        while (true) {
            if (pos_ < buffer_.size()) return buffer_[pos_++];
            if (exhausted_) return std::nullopt;
            refill();
        }
    }

private:
    void refill() {
        buffer_.clear();
        pos_ = 0;
        const std::uint64_t lo = next_lo_;
        // windows start small and double up to the segment size
        const std::uint64_t window = window_;
        window_ = std::min(std::max<std::uint64_t>(opts_.segment_size, 1024), 2 * window_);
        const std::uint64_t hi = (UINT64_MAX - lo > window) ? lo + window : UINT64_MAX;
        if (hi == UINT64_MAX) exhausted_ = true;  // 2^64-1 = 3 * 5 * 17 * ... is composite
        next_lo_ = hi;

        const std::uint64_t bound = detail::ceil_sqrt(hi);
        if (detail::base_primes_bytes(bound) > opts_.memory_budget / 4) {
            for (std::uint64_t x = lo; x < hi; ++x)
                if (is_prime(x)) buffer_.push_back(x);
            return;
        }
        if (bound > base_bound_) {
            base_bound_ = std::max(bound, std::min<std::uint64_t>(2 * base_bound_, std::uint64_t{1} << 32));
            base_ = odd_primes_upto(base_bound_, opts_.memory_budget);
        }
        detail::sieve_segment(lo, hi, base_).for_each_prime([&](std::uint64_t p) { buffer_.push_back(p); });
    }

    std::uint64_t next_lo_;
    SieveOptions opts_;
    std::vector<std::uint64_t> buffer_;
    std::size_t pos_ = 0;
    bool exhausted_ = false;
    std::uint64_t window_ = 1024;
    std::uint64_t base_bound_ = 0;
    std::vector<std::uint32_t> base_;
};

/// p_k, the k-th prime (p_1 = 2).
inline std::uint64_t nth_prime(std::uint64_t k, const SieveOptions& opts = {}) {
    if (k == 0) throw DomainError("nth_prime: k must be >= 1");
    if (k > kPrimeCountU64) throw OverflowError("nth_prime: p_k exceeds 64 bits");
    // Rosser: p_k < k (ln k + ln ln k) for k >= 6
    std::uint64_t upper = 14;
    if (k >= 6) {
        long double kk = static_cast<long double>(k);
        long double est = kk * (__builtin_logl(kk) + __builtin_logl(__builtin_logl(kk))) + 16;
        upper = est >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(est);
    }
    std::uint64_t seen = 0, found = 0;
    sweep(0, upper, opts, [&](const PrimeTable& t) {
        const std::uint64_t c = t.count();
        if (seen + c < k) {
            seen += c;
            return true;
        }
        t.for_each_prime([&](std::uint64_t p) {
            if (++seen == k) {
                found = p;
                return false;
            }
            return true;
        });
        return false;
    });
    if (found == 0) throw OverflowError("nth_prime: p_k not found below the search bound");
    return found;
}

}  // namespace pikn
