#pragma once

// The sets A_n = {pi(kn) : k >= 1}, their truncations to [1, X] with
// X = pi(Kn), the complement inside the positive integers, and the window
// classifications K (two or more primes in ((k-1)n, kn]) and, for n = 4,
// V (exactly two primes in (4k, 4k+4]).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pikn/error.hpp"
#include "pikn/options.hpp"
#include "pikn/pi_engine.hpp"
#include "pikn/report.hpp"

namespace pikn {

struct ProfileOptions {
    SieveOptions sieve;
    /// The complement list is kept only when X is at most this.
    std::uint64_t complement_bound = 100'000'000;
};

struct AnProfile {
    std::uint64_t n = 1;
    std::uint64_t K = 0;
    std::uint64_t X = 0;  // pi(Kn)
    /// Sorted distinct pi(kn), k <= K. May start with 0 (n = 1), which lies
    /// outside the positive-integer universe of the complement.
    std::vector<std::uint64_t> members;
    /// [1, X] minus members, when X <= complement_bound.
    std::optional<std::vector<std::uint64_t>> complement;
    /// k in [1, K] with pi(kn) - pi(kn - n) >= 2.
    std::vector<std::uint64_t> kset;
    /// n = 4 only: k in [1, K) with pi(4k + 4) - pi(4k) = 2.
    std::optional<std::vector<std::uint64_t>> vset;

    std::uint64_t positive_member_count() const {
        return members.size() - (!members.empty() && members.front() == 0 ? 1 : 0);
    }
};

/// Builds the profile from a single sweep over [0, Kn].
inline AnProfile an_profile(std::uint64_t n, std::uint64_t K, const ProfileOptions& opts = {}) {
    AnProfile p;
    p.n = n;
    p.K = K;
    if (n == 4) p.vset.emplace();
    std::uint64_t prev = 0;
    for_each_pi_at_multiples(n, K, opts.sieve, [&](std::uint64_t k, std::uint64_t v) {
        const std::uint64_t gap = v - prev;
        if (gap >= 2) p.kset.push_back(k);
        // window k of the n = 4 sweep is (4(k-1), 4k], i.e. V-index k - 1
        if (n == 4 && k >= 2 && gap == 2) p.vset->push_back(k - 1);
        if (p.members.empty() || p.members.back() != v) p.members.push_back(v);
        prev = v;
    });
    p.X = prev;

    if (p.X <= opts.complement_bound) {
        std::vector<std::uint64_t> comp;
        comp.reserve(p.X - p.positive_member_count());
        auto it = p.members.begin();
        for (std::uint64_t a = 1; a <= p.X; ++a) {
            while (it != p.members.end() && *it < a) ++it;
            if (it == p.members.end() || *it != a) comp.push_back(a);
        }
        p.complement = std::move(comp);
    }
    return p;
}

/// |{a in [1, X] : a not a member}|.
inline std::uint64_t complement_card_direct(const AnProfile& p) {
    if (p.complement) return p.complement->size();
    return p.X - p.positive_member_count();
}

/// Sum over windows with at least two primes of (primes in window - 1),
/// with pi(0) = 0 at the first window.
inline std::uint64_t complement_card_gapsum(std::uint64_t n, std::uint64_t K,
                                            const SieveOptions& opts = {}) {
    std::uint64_t prev = 0, total = 0;
    for_each_pi_at_multiples(n, K, opts, [&](std::uint64_t, std::uint64_t v) {
        if (v - prev >= 2) total += v - prev - 1;
        prev = v;
    });
    return total;
}

/// |V| for V = {1 <= k < K : pi(4k + 4) - pi(4k) = 2}.
inline std::uint64_t vset_card(std::uint64_t K, const SieveOptions& opts = {}) {
    if (K < 2) throw DomainError("vset_card: K must be >= 2");
    std::uint64_t prev = 0, count = 0;
    for_each_pi_at_multiples(4, K, opts, [&](std::uint64_t k, std::uint64_t v) {
        if (k >= 2 && v - prev == 2) ++count;
        prev = v;
    });
    return count;
}

/// complement_card_direct(an_profile(n, K)) for every K in [1, Kmax]
/// (index K - 1), by counting distinct members as the truncation grows.
inline std::vector<std::uint64_t> complement_card_prefix(std::uint64_t n, std::uint64_t Kmax,
                                                         const SieveOptions& opts = {}) {
    std::vector<std::uint64_t> out;
    out.reserve(Kmax);
    std::uint64_t distinct_positive = 0, last = 0;
    for_each_pi_at_multiples(n, Kmax, opts, [&](std::uint64_t, std::uint64_t v) {
        if (v != 0 && v != last) ++distinct_positive;
        last = v;
        out.push_back(v - distinct_positive);
    });
    return out;
}

/// vset_card(K) for every K in [1, Kmax] (index K - 1; K = 1 gives 0).
inline std::vector<std::uint64_t> vset_card_prefix(std::uint64_t Kmax, const SieveOptions& opts = {}) {
    std::vector<std::uint64_t> out;
    out.reserve(Kmax);
    std::uint64_t prev = 0, count = 0;
    for_each_pi_at_multiples(4, Kmax, opts, [&](std::uint64_t k, std::uint64_t v) {
        if (k >= 2 && v - prev == 2) ++count;
        prev = v;
        out.push_back(count);
    });
    return out;
}

struct GrowthOptions {
    SieveOptions sieve;
    std::uint64_t initial_k = 64;
    /// K never grows past this; hitting it raises SearchCapError.
    std::uint64_t max_k = std::uint64_t{1} << 28;
};

/// The first `count` positive members of A_n satisfying pred, ascending.
/// K doubles between sweeps; members found for a smaller K stay members and
/// keep their order, so the result does not depend on the growth schedule.
template <class Pred>
std::vector<std::uint64_t> first_members_where(std::uint64_t n, std::uint64_t count, Pred&& pred,
                                               const GrowthOptions& opts = {}) {
    if (n == 0) throw DomainError("n must be >= 1");
    if (count == 0) throw DomainError("count must be >= 1");
    std::uint64_t K = std::max<std::uint64_t>(1, std::min(opts.initial_k, opts.max_k));
    while (true) {
        std::vector<std::uint64_t> hits;
        std::uint64_t last = 0;
        for_each_pi_at_multiples(n, K, opts.sieve, [&](std::uint64_t, std::uint64_t v) {
            if (v != 0 && v != last && pred(v)) hits.push_back(v);
            last = v;
            return hits.size() < count;
        });
        if (hits.size() >= count) return hits;
        if (K >= opts.max_k)
            throw SearchCapError("only " + std::to_string(hits.size()) + " of " + std::to_string(count) +
                                 " members found with K <= " + std::to_string(opts.max_k));
        K = std::min(opts.max_k, K * 2);
    }
}

// ---------------------------------------------------------------------------
// Report emitters

inline std::string profile_csv_header() { return "n,K,X,members,complement,kset,vset"; }

inline std::string profile_csv_row(const AnProfile& p) {
    std::string row = std::to_string(p.n) + "," + std::to_string(p.K) + "," + std::to_string(p.X) + "," +
                      std::to_string(p.members.size()) + "," + std::to_string(complement_card_direct(p)) +
                      "," + std::to_string(p.kset.size()) + ",";
    if (p.vset) row += std::to_string(p.vset->size());
    return row;
}

inline nlohmann::ordered_json profile_json(const AnProfile& p, bool with_sets = false) {
    nlohmann::ordered_json j;
    j["n"] = p.n;
    j["K"] = p.K;
    j["X"] = p.X;
    j["members"] = p.members.size();
    j["complement"] = complement_card_direct(p);
    j["kset"] = p.kset.size();
    j["vset"] = p.vset ? nlohmann::ordered_json(p.vset->size()) : nlohmann::ordered_json(nullptr);
    if (with_sets) {
        j["member_list"] = p.members;
        j["complement_list"] = p.complement ? nlohmann::ordered_json(*p.complement) : nlohmann::ordered_json(nullptr);
        j["kset_list"] = p.kset;
        j["vset_list"] = p.vset ? nlohmann::ordered_json(*p.vset) : nlohmann::ordered_json(nullptr);
    }
    return j;
}

}  // namespace pikn
