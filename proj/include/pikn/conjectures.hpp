#pragma once

// Witness searches along pi(kn): prime values (k <= n), values divisible by n
// (k <= p_n), residue coverage mod n (k <= 2 p_n), the s_m maximum with its
// solvability criterion, and resumable bulk verification.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pikn/an_sets.hpp"
#include "pikn/error.hpp"
#include "pikn/options.hpp"
#include "pikn/pi_engine.hpp"
#include "pikn/report.hpp"
#include "pikn/sieve.hpp"

namespace pikn {

/// Least k in [1, n] with pi(kn) prime; nullopt would be a counterexample.
inline std::optional<std::uint64_t> sun_witness(std::uint64_t n, const SieveOptions& opts = {}) {
    if (n < 2) throw DomainError("sun_witness: n must be >= 2");
    std::optional<std::uint64_t> found;
    for_each_pi_at_multiples(n, n, opts, [&](std::uint64_t k, std::uint64_t v) {
        if (is_prime(v)) found = k;
        return !found;
    });
    return found;
}

/// Least k in [1, p_n] with n | pi(kn).
inline std::optional<std::uint64_t> div_witness(std::uint64_t n, const SieveOptions& opts = {}) {
    if (n == 0) throw DomainError("div_witness: n must be >= 1");
    std::optional<std::uint64_t> found;
    for_each_pi_at_multiples(n, nth_prime(n, opts), opts, [&](std::uint64_t k, std::uint64_t v) {
        if (v % n == 0) found = k;
        return !found;
    });
    return found;
}

struct ResidueCover {
    bool complete = false;
    std::vector<std::uint64_t> missing;  // ascending residues mod n
};

/// Whether {pi(kn) : 1 <= k <= 2 p_n} meets every residue class mod n.
inline ResidueCover residue_cover(std::uint64_t n, const SieveOptions& opts = {}) {
    if (n == 0) throw DomainError("residue_cover: n must be >= 1");
    std::vector<bool> seen(n, false);
    std::uint64_t remaining = n;
    const std::uint64_t pn = nth_prime(n, opts);
    if (pn > UINT64_MAX / 2) throw OverflowError("residue_cover: 2 p_n exceeds 64 bits");
    for_each_pi_at_multiples(n, 2 * pn, opts, [&](std::uint64_t, std::uint64_t v) {
        const std::uint64_t r = v % n;
        if (!seen[r]) {
            seen[r] = true;
            --remaining;
        }
        return remaining > 0;
    });
    ResidueCover out;
    out.complete = remaining == 0;
    for (std::uint64_t r = 0; r < n; ++r)
        if (!seen[r]) out.missing.push_back(r);
    return out;
}

/// First `count` positive members a of A_n with a = r (mod m), ascending.
inline std::vector<std::uint64_t> residue_hits(std::uint64_t n, std::uint64_t m, std::int64_t r,
                                               std::uint64_t count, const GrowthOptions& opts = {}) {
    if (m == 0) throw DomainError("residue_hits: m must be >= 1");
    const auto mm = static_cast<std::int64_t>(std::min<std::uint64_t>(m, INT64_MAX));
    const auto rr = static_cast<std::uint64_t>(((r % mm) + mm) % mm);
    return first_members_where(n, count, [&](std::uint64_t a) { return a % m == rr; }, opts);
}

struct ConjectureReport {
    std::uint64_t n = 0;
    std::optional<std::uint64_t> sun_witness;
    std::optional<std::uint64_t> div_witness;
    bool residue_cover = false;
    std::vector<std::uint64_t> missing_residues;

    /// True when any checked statement failed for this n.
    bool counterexample() const { return (n >= 2 && !sun_witness) || !div_witness || !residue_cover; }
};

inline ConjectureReport conjecture_report(std::uint64_t n, const SieveOptions& opts = {}) {
    ConjectureReport rep;
    rep.n = n;
    if (n >= 2) rep.sun_witness = pikn::sun_witness(n, opts);
    rep.div_witness = pikn::div_witness(n, opts);
    auto cover = pikn::residue_cover(n, opts);
    rep.residue_cover = cover.complete;
    rep.missing_residues = std::move(cover.missing);
    return rep;
}

inline std::string conjecture_csv_header() { return "n,sun_witness,div_witness,residue_cover,missing_residues"; }

inline std::string conjecture_csv_row(const ConjectureReport& r) {
    return std::to_string(r.n) + "," + csv_field(r.sun_witness) + "," + csv_field(r.div_witness) + "," +
           (r.residue_cover ? "true" : "false") + "," + (r.missing_residues.empty() ? "" : join_list(r.missing_residues));
}

inline nlohmann::ordered_json conjecture_json(const ConjectureReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["sun_witness"] = r.sun_witness ? nlohmann::ordered_json(*r.sun_witness) : nlohmann::ordered_json(nullptr);
    j["div_witness"] = r.div_witness ? nlohmann::ordered_json(*r.div_witness) : nlohmann::ordered_json(nullptr);
    j["residue_cover"] = r.residue_cover;
    j["missing_residues"] = r.missing_residues;
    return j;
}

// ---------------------------------------------------------------------------
// s_m = max{k m - p_k : k >= 1}, attained with k <= floor(e^(m+1)).

inline constexpr std::int64_t kDefaultMaxM = 12;

/// floor(e^(m+1)), the index range the maximum is taken over.
inline std::uint64_t s_m_index_bound(std::int64_t m) {
    return static_cast<std::uint64_t>(std::floor(std::exp(static_cast<long double>(m + 1))));
}

/// max over k <= kmax of (k m - p_k).
inline std::int64_t max_km_minus_pk(std::int64_t m, std::uint64_t kmax, const SieveOptions& opts = {}) {
    PrimeStream primes(0, opts);
    std::int64_t best = INT64_MIN;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const auto p = static_cast<std::int64_t>(*primes.next());
        best = std::max(best, static_cast<std::int64_t>(k) * m - p);
    }
    return best;
}

inline std::int64_t s_m(std::int64_t m, std::int64_t max_m = kDefaultMaxM, const SieveOptions& opts = {}) {
    if (m < 1 || m > max_m)
        throw DomainError("s_m: m=" + std::to_string(m) + " outside [1, " + std::to_string(max_m) + "]");
    return max_km_minus_pk(m, s_m_index_bound(m), opts);
}

/// Least n in (1, n_max] with m * pi(n) = n + a.
inline std::optional<std::uint64_t> find_n(std::int64_t a, std::int64_t m, std::uint64_t n_max,
                                           const SieveOptions& opts = {}) {
    if (m < 1) throw DomainError("find_n: m must be >= 1");
    if (n_max < 2) return std::nullopt;
    // pi(n) = c exactly on [p_c, p_{c+1} - 1]; the only candidate there is m c - a.
    PrimeStream primes(0, opts);
    std::uint64_t pc = *primes.next();
    for (std::uint64_t c = 1; pc <= n_max; ++c) {
        const std::uint64_t next = *primes.next();
        const __int128 cand = static_cast<__int128>(m) * c - a;
        const std::uint64_t top = std::min(next - 1, n_max);
        if (cand >= static_cast<__int128>(pc) && cand <= static_cast<__int128>(top))
            return static_cast<std::uint64_t>(cand);
        pc = next;
    }
    return std::nullopt;
}

/// a <= s_m, equivalently pi(n) = (n + a) / m has a solution n > 1.
inline bool solvable(std::int64_t a, std::int64_t m, std::int64_t max_m = kDefaultMaxM,
                     const SieveOptions& opts = {}) {
    return a <= s_m(m, max_m, opts);
}

/// Least n in [1, n_max] with pi(mn) = m + n.
inline std::optional<std::uint64_t> cor12_witness(std::uint64_t m, std::uint64_t n_max,
                                                  const SieveOptions& opts = {}) {
    if (m < 5) throw DomainError("cor12_witness: m must be >= 5");
    if (n_max == 0) return std::nullopt;
    std::optional<std::uint64_t> found;
    for_each_pi_at_multiples(m, n_max, opts, [&](std::uint64_t n, std::uint64_t v) {
        if (v == m + n) found = n;
        return !found;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Bulk verification with an append-only checkpoint log.

inline constexpr int kCheckpointSchema = 1;

/// A verified inclusive range [n_lo, n_hi] and the n in it without a witness.
struct VerificationCheckpoint {
    std::uint64_t n_lo = 0;
    std::uint64_t n_hi = 0;
    std::vector<std::uint64_t> failures;
    std::chrono::milliseconds elapsed{0};
    int schema_version = kCheckpointSchema;

    friend bool operator==(const VerificationCheckpoint& a, const VerificationCheckpoint& b) {
        return a.n_lo == b.n_lo && a.n_hi == b.n_hi && a.failures == b.failures &&
               a.schema_version == b.schema_version;
    }
};

/// One checkpoint record per line:
///   <schema> <n_lo> <n_hi> <failures: comma list or -> <elapsed_ms> <unix_seconds>
/// Lines starting with '#' are comments.
inline std::string checkpoint_line(const VerificationCheckpoint& c, std::int64_t unix_seconds) {
    return std::to_string(c.schema_version) + " " + std::to_string(c.n_lo) + " " + std::to_string(c.n_hi) +
           " " + join_list(c.failures, ',') + " " + std::to_string(c.elapsed.count()) + " " +
           std::to_string(unix_seconds);
}

inline VerificationCheckpoint parse_checkpoint_line(const std::string& line) {
    std::istringstream in(line);
    std::string schema, lo, hi, fails, ms, ts, extra;
    if (!(in >> schema >> lo >> hi >> fails >> ms >> ts) || (in >> extra))
        throw CheckpointError("malformed checkpoint record: '" + line + "'");
    auto num = [&](const std::string& s) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw CheckpointError("bad number '" + s + "' in checkpoint record: '" + line + "'");
        return v;
    };
    VerificationCheckpoint c;
    if (num(schema) != static_cast<std::uint64_t>(kCheckpointSchema))
        throw CheckpointError("checkpoint schema " + schema + " does not match " + std::to_string(kCheckpointSchema));
    c.n_lo = num(lo);
    c.n_hi = num(hi);
    if (c.n_lo > c.n_hi) throw CheckpointError("inverted range in checkpoint record: '" + line + "'");
    if (fails != "-") {
        std::size_t start = 0;
        while (start <= fails.size()) {
            auto comma = fails.find(',', start);
            if (comma == std::string::npos) comma = fails.size();
            c.failures.push_back(num(fails.substr(start, comma - start)));
            start = comma + 1;
        }
    }
    c.elapsed = std::chrono::milliseconds(num(ms));
    num(ts);
    return c;
}

/// Verified ranges merged into maximal disjoint intervals. Merging is a set
/// union, so the load order of records does not matter.
class CheckpointStore {
public:
    static CheckpointStore load(const std::filesystem::path& path) {
        CheckpointStore store;
        std::ifstream in(path);
        if (!in) {
            if (std::filesystem::exists(path)) throw CheckpointError("cannot read checkpoint " + path.string());
            return store;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            store.add(parse_checkpoint_line(line));
        }
        return store;
    }

    void add(const VerificationCheckpoint& rec) {
        ranges_.push_back(rec);
        std::sort(ranges_.begin(), ranges_.end(),
                  [](const auto& a, const auto& b) { return a.n_lo < b.n_lo; });
        std::vector<VerificationCheckpoint> merged;
        for (auto& r : ranges_) {
            if (!merged.empty() && (merged.back().n_hi == UINT64_MAX || r.n_lo <= merged.back().n_hi + 1)) {
                auto& m = merged.back();
                m.n_hi = std::max(m.n_hi, r.n_hi);
                m.failures.insert(m.failures.end(), r.failures.begin(), r.failures.end());
                std::sort(m.failures.begin(), m.failures.end());
                m.failures.erase(std::unique(m.failures.begin(), m.failures.end()), m.failures.end());
                m.elapsed += r.elapsed;
            } else {
                merged.push_back(r);
            }
        }
        ranges_ = std::move(merged);
    }

    const std::vector<VerificationCheckpoint>& ranges() const noexcept { return ranges_; }

    /// Maximal sub-ranges of [lo, hi] not yet verified, ascending.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> gaps(std::uint64_t lo, std::uint64_t hi) const {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
        std::uint64_t cursor = lo;
        bool done = false;
        for (const auto& r : ranges_) {
            if (done || r.n_hi < cursor) continue;
            if (r.n_lo > hi) break;
            if (r.n_lo > cursor) out.emplace_back(cursor, r.n_lo - 1);
            if (r.n_hi >= hi) done = true;
            else cursor = r.n_hi + 1;
        }
        if (!done) out.emplace_back(cursor, hi);
        return out;
    }

    /// The verified view of [lo, hi]; throws if part of it is not covered.
    VerificationCheckpoint restrict_to(std::uint64_t lo, std::uint64_t hi) const {
        if (!gaps(lo, hi).empty()) throw CheckpointError("range not fully verified");
        VerificationCheckpoint out;
        out.n_lo = lo;
        out.n_hi = hi;
        for (const auto& r : ranges_) {
            if (r.n_hi < lo || r.n_lo > hi) continue;
            out.elapsed += r.elapsed;
            for (auto f : r.failures)
                if (f >= lo && f <= hi) out.failures.push_back(f);
        }
        return out;
    }

private:
    std::vector<VerificationCheckpoint> ranges_;
};

inline void append_checkpoint(const std::filesystem::path& path, const VerificationCheckpoint& rec) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw CheckpointError("cannot open checkpoint " + path.string() + " for append");
    if (fresh) out << "# pikn sun-verify checkpoint: schema n_lo n_hi failures elapsed_ms unix_seconds\n";
    const auto now = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::system_clock::now().time_since_epoch());
    out << checkpoint_line(rec, now.count()) << '\n';
    out.flush();
    if (!out) throw CheckpointError("write to checkpoint " + path.string() + " failed");
}

struct VerifyOptions {
    SieveOptions sieve;
    /// One checkpoint record per this many n.
    std::uint64_t checkpoint_every = 10'000;
    /// The shared pi lookup covers [0, n_hi * index_factor]; larger kn stream.
    std::uint64_t index_factor = 64;
};

namespace detail {

inline std::optional<std::uint64_t> sun_witness_indexed(std::uint64_t n, const PiIndex& index,
                                                        const SieveOptions& opts) {
    for (std::uint64_t k = 1; k <= n; ++k) {
        const std::uint64_t x = k * n;
        if (x > index.limit()) {
            // rare: finish this n with a streaming sweep
            std::optional<std::uint64_t> found;
            for_each_pi_at_multiples(n, n, opts, [&](std::uint64_t kk, std::uint64_t v) {
                if (kk >= k && is_prime(v)) found = kk;
                return !found;
            });
            return found;
        }
        const std::uint64_t v = index.pi(x);
        if (index.is_prime(v)) return k;
    }
    return std::nullopt;
}

inline std::vector<std::uint64_t> sun_failures(std::uint64_t lo, std::uint64_t hi, const PiIndex& index,
                                               const SieveOptions& opts) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(std::max(1u, opts.threads), hi - lo + 1));
    std::vector<std::vector<std::uint64_t>> parts(workers);
    auto run = [&](unsigned t) {
        const std::uint64_t span = hi - lo + 1;
        const std::uint64_t a = lo + span * t / workers, b = lo + span * (t + 1) / workers;
        for (std::uint64_t n = a; n < b; ++n)
            if (!sun_witness_indexed(n, index, opts)) parts[t].push_back(n);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t);
    }
    std::vector<std::uint64_t> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace detail

/// Checks that every n in [n_lo, n_hi] has a prime among pi(n), ..., pi(n^2).
/// With a checkpoint path, verified ranges already recorded there are skipped
/// and each finished block of n is appended before the next one starts.
inline VerificationCheckpoint sun_verify_range(std::uint64_t n_lo, std::uint64_t n_hi,
                                               const std::optional<std::filesystem::path>& checkpoint = std::nullopt,
                                               const VerifyOptions& opts = {}) {
    if (n_lo < 2 || n_lo > n_hi) throw DomainError("sun_verify_range: need 2 <= n_lo <= n_hi");
    if (opts.checkpoint_every == 0) throw DomainError("sun_verify_range: checkpoint_every must be >= 1");
    CheckpointStore store = checkpoint ? CheckpointStore::load(*checkpoint) : CheckpointStore{};
    const auto todo = store.gaps(n_lo, n_hi);
    if (!todo.empty()) {
        // index sized to what the remaining work needs and the budget allows
        std::uint64_t want = todo.back().second > UINT64_MAX / std::max<std::uint64_t>(1, opts.index_factor)
                                 ? UINT64_MAX - 1
                                 : todo.back().second * std::max<std::uint64_t>(1, opts.index_factor);
        const std::uint64_t affordable = opts.sieve.memory_budget / 2 * 12;  // index costs ~9/128 bytes per number
        want = std::max<std::uint64_t>(1024, std::min(want, affordable));
        const PiIndex index(want, opts.sieve);

        for (auto [a, b] : todo) {
            for (std::uint64_t lo = a;; lo += opts.checkpoint_every) {
                const std::uint64_t hi = (b - lo >= opts.checkpoint_every) ? lo + opts.checkpoint_every - 1 : b;
                const auto t0 = std::chrono::steady_clock::now();
                VerificationCheckpoint rec;
                rec.n_lo = lo;
                rec.n_hi = hi;
                rec.failures = detail::sun_failures(lo, hi, index, opts.sieve);
                rec.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0);
                for (auto f : rec.failures)
                    std::clog << "sun-verify: COUNTEREXAMPLE n=" << f << " (no prime among pi(kn), k<=n)\n";
                if (checkpoint) append_checkpoint(*checkpoint, rec);
                store.add(rec);
                if (hi == b) break;
            }
        }
    }
    return store.restrict_to(n_lo, n_hi);
}

inline nlohmann::ordered_json checkpoint_json(const VerificationCheckpoint& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = c.schema_version;
    j["n_lo"] = c.n_lo;
    j["n_hi"] = c.n_hi;
    j["failures"] = c.failures;
    return j;
}

}  // namespace pikn
