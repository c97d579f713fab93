#pragma once

// Almost-primes (Omega(n) <= 2), prime pairs at fixed distance, the twin prime
// constant, and the finite-X diagnostics for primes inside A_4.
//
// Convention: 1 is a P2-number (the empty product). Every count below
// includes it.

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pikn/an_sets.hpp"
#include "pikn/error.hpp"
#include "pikn/options.hpp"
#include "pikn/pi_engine.hpp"
#include "pikn/report.hpp"
#include "pikn/sieve.hpp"

namespace pikn {

/// Omega(n) <= 2. Trial division up to cbrt(n) finds the smallest prime
/// factor if n has three or more; otherwise n is 1, prime, or a semiprime.
inline bool is_p2(std::uint64_t n) {
    if (n == 0) throw DomainError("is_p2: n must be >= 1");
    auto cofactor_ok = [n](std::uint64_t d) {
        const std::uint64_t m = n / d;
        return m == 1 || is_prime(m);
    };
    if (n % 2 == 0) return cofactor_ok(2);
    for (std::uint64_t d = 3; static_cast<unsigned __int128>(d) * d * d <= n; d += 2)
        if (n % d == 0) return cofactor_ok(d);
    return true;
}

/// |{n <= X : Omega(n) <= 2}| = 1 + pi(X) + sum_{p <= sqrt X} (pi(X/p) - pi(p) + 1).
inline std::uint64_t p2_count(std::uint64_t X, const SieveOptions& opts = {}) {
    if (X == 0) throw DomainError("p2_count: X must be >= 1");
    const std::uint64_t root = detail::isqrt(X);
    std::vector<std::uint64_t> small;
    if (root >= 2) small.push_back(2);
    for (auto p : odd_primes_upto(root, opts.memory_budget)) small.push_back(p);

    // ascending points: X/p for descending p, then X itself
    std::vector<std::uint64_t> points;
    points.reserve(small.size() + 1);
    for (auto it = small.rbegin(); it != small.rend(); ++it) points.push_back(X / *it);
    points.push_back(X);
    const auto pis = pi_at_points(points, opts);

    std::uint64_t total = 1 + pis.back();
    for (std::size_t i = 0; i < small.size(); ++i) {
        const std::uint64_t k = small.size() - i;  // p = small[k-1] is the k-th prime
        total += pis[i] - k + 1;
    }
    return total;
}

/// pi_h(X) = |{p <= X : p and p + h both prime}|.
inline std::uint64_t pair_count(std::uint64_t h, std::uint64_t X, const SieveOptions& opts = {}) {
    if (h == 0) throw DomainError("pair_count: h must be >= 1");
    if (X < 2) throw DomainError("pair_count: X must be >= 2");
    if (X >= UINT64_MAX - h) throw OverflowError("pair_count: X + h exceeds 64 bits");
    std::deque<std::uint64_t> window;  // primes in [q - h, q)
    std::uint64_t count = 0;
    for_each_prime(0, X + h + 1, opts, [&](std::uint64_t q) {
        while (!window.empty() && window.front() + h < q) window.pop_front();
        if (!window.empty() && window.front() + h == q && window.front() <= X) ++count;
        window.push_back(q);
    });
    return count;
}

/// V(N) for N = 1..Nmax (index N - 1): n <= N with 4n+1 and 4n+3 both prime.
inline std::vector<std::uint64_t> twin_count_4n_prefix(std::uint64_t Nmax, const SieveOptions& opts = {}) {
    if (Nmax == 0) throw DomainError("twin_count_4n: N must be >= 1");
    if (Nmax > (UINT64_MAX - 4) / 4) throw OverflowError("twin_count_4n: 4N + 3 exceeds 64 bits");
    std::vector<std::uint64_t> out(Nmax, 0);
    std::uint64_t prev = 0;
    for_each_prime(0, 4 * Nmax + 4, opts, [&](std::uint64_t p) {
        // (4n+1, 4n+3) are consecutive primes whenever both are prime
        if (prev >= 5 && p == prev + 2 && prev % 4 == 1) out[(prev - 1) / 4 - 1] = 1;
        prev = p;
    });
    for (std::uint64_t i = 1; i < Nmax; ++i) out[i] += out[i - 1];
    return out;
}

/// V(N).
inline std::uint64_t twin_count_4n(std::uint64_t N, const SieveOptions& opts = {}) {
    if (N == 0) throw DomainError("twin_count_4n: N must be >= 1");
    if (N > (UINT64_MAX - 4) / 4) throw OverflowError("twin_count_4n: 4N + 3 exceeds 64 bits");
    std::uint64_t count = 0, prev = 0;
    for_each_prime(0, 4 * N + 4, opts, [&](std::uint64_t p) {
        if (prev >= 5 && p == prev + 2 && prev % 4 == 1) ++count;
        prev = p;
    });
    return count;
}

struct SigmaEstimate {
    double value = 0;
    /// Largest prime included is <= prime_bound.
    std::uint64_t prime_bound = 0;
    /// 1/(P-1) bounds the omitted tail sum over p > P of 1/(p-1)^2, hence |value - S|.
    double tail_bound = 0;
};

/// prod over odd primes p <= P of (1 - 1/(p-1)^2). on_partial(p, product)
/// sees every partial product.
template <class F>
SigmaEstimate sigma_twin_upto(std::uint64_t P, const SieveOptions& opts, F&& on_partial) {
    if (P < 3) throw DomainError("sigma_twin_upto: P must be >= 3");
    long double prod = 1.0L;
    for_each_prime(3, P + 1, opts, [&](std::uint64_t p) {
        const long double q = static_cast<long double>(p - 1);
        prod *= 1.0L - 1.0L / (q * q);
        on_partial(p, static_cast<double>(prod));
    });
    return {static_cast<double>(prod), P, 1.0 / static_cast<double>(P - 1)};
}

inline SigmaEstimate sigma_twin_upto(std::uint64_t P, const SieveOptions& opts = {}) {
    return sigma_twin_upto(P, opts, [](std::uint64_t, double) {});
}

/// The twin prime constant within abs_tol. P is chosen so that 1/(P-1) < abs_tol/2.
inline SigmaEstimate sigma_twin(double abs_tol, const SieveOptions& opts = {}) {
    if (!(abs_tol >= 1e-10 && abs_tol <= 1e-3))
        throw DomainError("sigma_twin: tolerance must lie in [1e-10, 1e-3]");
    const auto P = static_cast<std::uint64_t>(std::floor(2.0 / abs_tol)) + 2;
    return sigma_twin_upto(P, opts);
}

/// sigma_twin(1e-8), computed once per process.
inline double twin_prime_constant() {
    static const double value = sigma_twin(1e-8).value;
    return value;
}

/// V(N) / (4 S N / log^2 N).
inline double bh_ratio(std::uint64_t N, const SieveOptions& opts = {}) {
    if (N < 16) throw DomainError("bh_ratio: N must be >= 16");
    const double n = static_cast<double>(N);
    const double logn = std::log(n);
    return static_cast<double>(twin_count_4n(N, opts)) / (4.0 * twin_prime_constant() * n / (logn * logn));
}

struct A4Stats {
    std::uint64_t K = 0;
    std::uint64_t X = 0;     // pi(4K)
    std::uint64_t pi_X = 0;  // pi(X)
    std::uint64_t vset_card = 0;
    std::uint64_t a4_prime_count = 0;  // primes among the members of A_4(X)
    std::int64_t a4_lower_bound = 0;   // pi(X) - (1 + |V|)
    double ratio = 0;                  // a4_lower_bound / ((1 - S) X / log X)
};

inline A4Stats a4_prime_stats(std::uint64_t K, const SieveOptions& opts = {}) {
    if (K < 3) throw DomainError("a4_prime_stats: K must be >= 3");
    ProfileOptions popts;
    popts.sieve = opts;
    popts.complement_bound = 0;
    const auto profile = an_profile(4, K, popts);
    A4Stats s;
    s.K = K;
    s.X = profile.X;
    s.pi_X = pi(s.X, opts);
    s.vset_card = profile.vset->size();
    for (auto a : profile.members)
        if (is_prime(a)) ++s.a4_prime_count;
    s.a4_lower_bound = static_cast<std::int64_t>(s.pi_X) - static_cast<std::int64_t>(1 + s.vset_card);
    const double x = static_cast<double>(s.X);
    s.ratio = static_cast<double>(s.a4_lower_bound) / ((1.0 - twin_prime_constant()) * x / std::log(x));
    return s;
}

/// First `count` members of A_n that are P2-numbers.
inline std::vector<std::uint64_t> p2_in_an(std::uint64_t n, std::uint64_t count, const GrowthOptions& opts = {}) {
    return first_members_where(n, count, [](std::uint64_t a) { return is_p2(a); }, opts);
}

/// Every density quantity at one scale N: P2 and pair counts up to N, V(N),
/// the Bateman-Horn ratio at N, and A_4 statistics for K = N.
struct DensityReport {
    std::uint64_t X_or_N = 0;
    std::uint64_t p2_count = 0;
    std::uint64_t twin_V = 0;
    std::map<std::uint64_t, std::uint64_t> pair_counts;
    SigmaEstimate sigma;
    double bh_ratio = 0;
    A4Stats a4;
};

inline DensityReport density_report(std::uint64_t N, const std::vector<std::uint64_t>& hs, double sigma_tol = 1e-8,
                                    const SieveOptions& opts = {}) {
    if (N < 16) throw DomainError("density_report: N must be >= 16");
    DensityReport r;
    r.X_or_N = N;
    r.p2_count = pikn::p2_count(N, opts);
    r.twin_V = twin_count_4n(N, opts);
    for (auto h : hs) r.pair_counts[h] = pair_count(h, N, opts);
    r.sigma = sigma_twin(sigma_tol, opts);
    r.bh_ratio = pikn::bh_ratio(N, opts);
    r.a4 = a4_prime_stats(N, opts);
    return r;
}

inline std::string density_csv_header(const DensityReport& r) {
    std::string h = "N,p2_count,twin_V";
    for (const auto& [k, v] : r.pair_counts) h += ",pi_h" + std::to_string(k);
    return h + ",sigma,sigma_tail_bound,bh_ratio,a4_X,a4_prime_count,a4_lower_bound,a4_ratio";
}

inline std::string density_csv_row(const DensityReport& r) {
    std::string row = std::to_string(r.X_or_N) + "," + std::to_string(r.p2_count) + "," + std::to_string(r.twin_V);
    for (const auto& [k, v] : r.pair_counts) row += "," + std::to_string(v);
    row += "," + format_fixed(r.sigma.value, 10) + "," + format_fixed(r.sigma.tail_bound, 10) + "," +
           format_fixed(r.bh_ratio) + "," + std::to_string(r.a4.X) + "," + std::to_string(r.a4.a4_prime_count) +
           "," + std::to_string(r.a4.a4_lower_bound) + "," + format_fixed(r.a4.ratio);
    return row;
}

inline nlohmann::ordered_json density_json(const DensityReport& r) {
    nlohmann::ordered_json j;
    j["N"] = r.X_or_N;
    j["p2_count"] = r.p2_count;
    j["twin_V"] = r.twin_V;
    nlohmann::ordered_json pc = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.pair_counts) pc[std::to_string(k)] = v;
    j["pair_counts"] = pc;
    j["sigma"] = {{"value", round_to(r.sigma.value, 10)},
                  {"prime_bound", r.sigma.prime_bound},
                  {"tail_bound", round_to(r.sigma.tail_bound, 12)}};
    j["bh_ratio"] = round_to(r.bh_ratio);
    j["a4"] = {{"K", r.a4.K},
               {"X", r.a4.X},
               {"pi_X", r.a4.pi_X},
               {"vset", r.a4.vset_card},
               {"prime_count", r.a4.a4_prime_count},
               {"lower_bound", r.a4.a4_lower_bound},
               {"ratio", round_to(r.a4.ratio)}};
    return j;
}

}  // namespace pikn
