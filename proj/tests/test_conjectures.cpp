#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "pikn/conjectures.hpp"

using namespace pikn;

using Values = std::vector<std::uint64_t>;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("pikn_test_" + name);
    std::filesystem::remove(p);
    return p;
}

// least n in (1, n_max] with m * pi(n) == n + a, by direct scan
std::optional<std::uint64_t> find_n_scan(std::int64_t a, std::int64_t m, const std::vector<std::uint64_t>& pi,
                                         std::uint64_t n_max) {
    for (std::uint64_t n = 2; n <= n_max; ++n)
        if (m * static_cast<std::int64_t>(pi[n]) == static_cast<std::int64_t>(n) + a) return n;
    return std::nullopt;
}

}  // namespace

TEST(SunWitness, KnownWitnesses) {
    EXPECT_EQ(sun_witness(10), 6u);
    EXPECT_EQ(sun_witness(13), 10u);
    EXPECT_EQ(sun_witness(2), 2u);
    EXPECT_THROW(sun_witness(1), DomainError);
}

TEST(SunWitness, ValidAndMinimalForRandomN) {
    const std::uint64_t limit = 4'000'000;
    auto pi = oracle::pi_table(limit);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t n = 2 + rng() % 9999;
        std::optional<std::uint64_t> expect;
        for (std::uint64_t k = 1; k <= n && k * n <= limit && !expect; ++k)
            if (oracle::is_prime_trial(pi[k * n])) expect = k;
        ASSERT_TRUE(expect.has_value()) << "oracle range too small for n=" << n;
        auto got = sun_witness(n);
        ASSERT_EQ(got, expect) << n;
        ASSERT_TRUE(is_prime(pi[*got * n]));
    }
}

TEST(SunVerifyRange, SmallRangeHasNoFailures) {
    auto c = sun_verify_range(2, 100);
    EXPECT_EQ(c.n_lo, 2u);
    EXPECT_EQ(c.n_hi, 100u);
    EXPECT_TRUE(c.failures.empty());
    EXPECT_THROW(sun_verify_range(1, 10), DomainError);
    EXPECT_THROW(sun_verify_range(10, 9), DomainError);
}

TEST(SunVerifyRange, IndexFallbackAgreesWithStreaming) {
    // a tiny index forces most n onto the streaming path
    VerifyOptions opts;
    opts.index_factor = 1;
    opts.checkpoint_every = 37;
    auto c = sun_verify_range(2, 3000, std::nullopt, opts);
    EXPECT_TRUE(c.failures.empty());
    for (std::uint64_t n = 2; n <= 300; ++n) {
        PiIndex idx(n * 3);
        EXPECT_EQ(detail::sun_witness_indexed(n, idx, opts.sieve), sun_witness(n)) << n;
    }
}

TEST(SunVerifyRange, ResumeMatchesFreshRun) {
    auto fresh_path = temp_path("fresh.ckpt");
    auto resumed_path = temp_path("resumed.ckpt");
    VerifyOptions opts;
    opts.checkpoint_every = 1000;

    auto fresh = sun_verify_range(2, 10'000, fresh_path, opts);
    sun_verify_range(2, 5'000, resumed_path, opts);
    auto resumed = sun_verify_range(2, 10'000, resumed_path, opts);
    EXPECT_EQ(fresh, resumed);
    EXPECT_TRUE(fresh.failures.empty());

    auto a = CheckpointStore::load(fresh_path), b = CheckpointStore::load(resumed_path);
    ASSERT_EQ(a.ranges().size(), 1u);
    ASSERT_EQ(b.ranges().size(), 1u);
    EXPECT_EQ(a.ranges()[0], b.ranges()[0]);

    // a resumed run over a covered range does no new work
    auto before = std::filesystem::file_size(resumed_path);
    sun_verify_range(100, 9'000, resumed_path, opts);
    EXPECT_EQ(std::filesystem::file_size(resumed_path), before);
    std::filesystem::remove(fresh_path);
    std::filesystem::remove(resumed_path);
}

TEST(Checkpoint, MergeIsOrderIndependent) {
    VerificationCheckpoint r1{2, 10, {}, std::chrono::milliseconds(1)};
    VerificationCheckpoint r2{11, 20, {15}, std::chrono::milliseconds(1)};
    VerificationCheckpoint r3{30, 40, {}, std::chrono::milliseconds(1)};
    CheckpointStore s1, s2;
    s1.add(r1);
    s1.add(r2);
    s1.add(r3);
    s2.add(r3);
    s2.add(r2);
    s2.add(r1);
    ASSERT_EQ(s1.ranges().size(), 2u);
    EXPECT_EQ(s1.ranges(), s2.ranges());
    EXPECT_EQ(s1.ranges()[0].n_hi, 20u);
    EXPECT_EQ(s1.ranges()[0].failures, (Values{15}));
    auto gaps = s1.gaps(5, 50);
    ASSERT_EQ(gaps.size(), 2u);
    EXPECT_EQ(gaps[0], std::make_pair(std::uint64_t{21}, std::uint64_t{29}));
    EXPECT_EQ(gaps[1], std::make_pair(std::uint64_t{41}, std::uint64_t{50}));
    EXPECT_TRUE(s1.gaps(3, 19).empty());
}

TEST(Checkpoint, LineRoundTrip) {
    VerificationCheckpoint c{2, 99, {7, 42}, std::chrono::milliseconds(12)};
    auto back = parse_checkpoint_line(checkpoint_line(c, 1700000000));
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.elapsed.count(), 12);
    EXPECT_EQ(checkpoint_line(VerificationCheckpoint{2, 3, {}, {}}, 5), "1 2 3 - 0 5");
}

TEST(Checkpoint, RejectsCorruptAndMismatchedFiles) {
    auto p = temp_path("corrupt.ckpt");
    {
        std::ofstream out(p);
        out << "# header\n1 2 100 - 5 1700000000\n1 101 2x0 - 5 1700000000\n";
    }
    EXPECT_THROW(CheckpointStore::load(p), CheckpointError);
    EXPECT_THROW(sun_verify_range(2, 200, p), CheckpointError);
    {
        std::ofstream out(p);
        out << "2 2 100 - 5 1700000000\n";
    }
    EXPECT_THROW(CheckpointStore::load(p), CheckpointError);
    {
        std::ofstream out(p);
        out << "1 2 100\n";
    }
    EXPECT_THROW(CheckpointStore::load(p), CheckpointError);
    {
        std::ofstream out(p);
        out << "1 50 40 - 1 1\n";
    }
    EXPECT_THROW(CheckpointStore::load(p), CheckpointError);
    std::filesystem::remove(p);
}

TEST(SM, SmallValuesByHand) {
    EXPECT_EQ(s_m(1), -1);
    EXPECT_EQ(s_m(2), 1);
    EXPECT_THROW(s_m(0), DomainError);
    EXPECT_THROW(s_m(13), DomainError);
    EXPECT_EQ(s_m_index_bound(1), 7u);
    EXPECT_EQ(s_m_index_bound(2), 20u);
    EXPECT_EQ(s_m_index_bound(12), 442413u);
}

TEST(SM, TruncationMatchesExtendedOracle) {
    for (std::int64_t m = 1; m <= 6; ++m)
        EXPECT_EQ(s_m(m), oracle::s_m_brute(m, 10 * s_m_index_bound(m))) << m;
}

TEST(SM, GrowsByAtLeastOne) {
    std::int64_t prev = s_m(1);
    for (std::int64_t m = 2; m <= 12; ++m) {
        std::int64_t cur = s_m(m);
        EXPECT_GE(cur, prev + 1) << m;
        prev = cur;
    }
}

TEST(Solvable, Examples) {
    EXPECT_TRUE(solvable(0, 2));
    const std::int64_t s3 = s_m(3);
    EXPECT_FALSE(solvable(s3 + 1, 3));
    EXPECT_TRUE(solvable(s3, 3));
    auto n = find_n(s3, 3, 1'000'000);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(3 * static_cast<std::int64_t>(pi(*n)), static_cast<std::int64_t>(*n) + s3);
}

TEST(FindN, ExamplesAgainstScan) {
    auto pi = oracle::pi_table(100);
    EXPECT_EQ(find_n(0, 2, 100), find_n_scan(0, 2, pi, 100));
    EXPECT_EQ(find_n(0, 2, 100), 2u);  // pi(2) = 1 = 2/2
    EXPECT_EQ(find_n(0, 3, 100), 27u);
    EXPECT_EQ(find_n(0, 3, 100), find_n_scan(0, 3, pi, 100));
    EXPECT_FALSE(find_n(1'000'000, 1, 1'000'000).has_value());
    EXPECT_FALSE(find_n(0, 2, 1).has_value());
    EXPECT_THROW(find_n(0, 0, 10), DomainError);
}

TEST(FindN, MatchesScanOnGrid) {
    const std::uint64_t n_max = 20'000;
    auto pi = oracle::pi_table(n_max);
    for (std::int64_t m = 1; m <= 8; ++m)
        for (std::int64_t a = -60; a <= 60; ++a) ASSERT_EQ(find_n(a, m, n_max), find_n_scan(a, m, pi, n_max)) << a << " " << m;
}

TEST(FindN, SolvableConsistency) {
    for (std::int64_t m = 1; m <= 5; ++m) {
        const std::int64_t s = s_m(m);
        for (std::int64_t a = -20; a <= 20; ++a)
            ASSERT_EQ(a <= s, find_n(a, m, 1'000'000).has_value()) << a << " " << m;
    }
}

TEST(Cor12Witness, AgainstScan) {
    auto pi = oracle::pi_table(1000);
    for (std::uint64_t m : {5u, 6u, 7u}) {
        std::optional<std::uint64_t> expect;
        for (std::uint64_t n = 1; n <= 100 && !expect; ++n)
            if (pi[m * n] == m + n) expect = n;
        EXPECT_EQ(cor12_witness(m, 100), expect) << m;
    }
    // pi(45) = 14 = 5 + 9 comes before pi(50) = 15 = 5 + 10
    EXPECT_EQ(cor12_witness(5, 100), 9u);
    EXPECT_EQ(pikn::pi(50), 15u);
    EXPECT_THROW(cor12_witness(4, 100), DomainError);
}

TEST(DivWitness, Examples) {
    EXPECT_EQ(div_witness(1), 1u);
    EXPECT_EQ(div_witness(2), 2u);
    EXPECT_EQ(div_witness(3), 2u);  // pi(6) = 3
    EXPECT_THROW(div_witness(0), DomainError);
}

TEST(DivWitness, AgainstOracle) {
    auto pi = oracle::pi_table(3'000'000);
    auto primes = oracle::primes_upto(20'000);
    for (std::uint64_t n = 1; n <= 300; ++n) {
        std::optional<std::uint64_t> expect;
        for (std::uint64_t k = 1; k <= primes[n - 1] && !expect; ++k)
            if (pi[k * n] % n == 0) expect = k;
        ASSERT_EQ(div_witness(n), expect) << n;
    }
}

TEST(ResidueCover, Examples) {
    for (std::uint64_t n : {1u, 2u, 10u}) {
        auto c = residue_cover(n);
        EXPECT_TRUE(c.complete) << n;
        EXPECT_TRUE(c.missing.empty()) << n;
    }
}

TEST(ResidueCover, HoldsForSmallModuli) {
    for (std::uint64_t n = 1; n <= 150; ++n) ASSERT_TRUE(residue_cover(n).complete) << n;
}

TEST(ResidueHits, Examples) {
    EXPECT_EQ(residue_hits(2, 2, 1, 3), (Values{1, 3, 5}));
    EXPECT_EQ(residue_hits(3, 2, 0, 3), (Values{2, 4, 6}));
    auto pi = oracle::pi_table(1000);
    auto members = oracle::an_members(4, 250, pi);
    Values expect;
    for (auto a : members)
        if (a % 5 == 3 && expect.size() < 2) expect.push_back(a);
    EXPECT_EQ(residue_hits(4, 5, 3, 2), expect);
    EXPECT_EQ(expect, (Values{8, 18}));
    EXPECT_EQ(residue_hits(4, 5, -2, 2), expect);
}

TEST(ResidueHits, PropertiesOnRandomInputs) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 60; ++i) {
        std::uint64_t n = 1 + rng() % 30, m = 1 + rng() % 12, r = rng() % m, count = 1 + rng() % 40;
        GrowthOptions g;
        g.initial_k = 1 + rng() % 50;
        auto hits = residue_hits(n, m, static_cast<std::int64_t>(r), count, g);
        ASSERT_EQ(hits.size(), count);
        auto profile = an_profile(n, 50'000);
        for (std::size_t j = 0; j < hits.size(); ++j) {
            ASSERT_EQ(hits[j] % m, r);
            if (j) ASSERT_LT(hits[j - 1], hits[j]);
            ASSERT_TRUE(std::binary_search(profile.members.begin(), profile.members.end(), hits[j]));
        }
        // independent of the growth schedule
        ASSERT_EQ(hits, residue_hits(n, m, static_cast<std::int64_t>(r), count));
    }
}

TEST(ResidueHits, CapIsReportedNotRefuted) {
    GrowthOptions g;
    g.initial_k = 4;
    g.max_k = 16;
    EXPECT_THROW(residue_hits(4, 1000, 7, 5, g), SearchCapError);
    EXPECT_THROW(residue_hits(4, 0, 0, 5), DomainError);
}

TEST(ConjectureReport, CsvAndJson) {
    auto r = conjecture_report(10);
    EXPECT_EQ(r.sun_witness, 6u);
    EXPECT_FALSE(r.counterexample());
    EXPECT_EQ(conjecture_csv_header(), "n,sun_witness,div_witness,residue_cover,missing_residues");
    EXPECT_EQ(conjecture_csv_row(r), "10,6," + std::to_string(*r.div_witness) + ",true,");
    auto j = nlohmann::json::parse(conjecture_json(conjecture_report(1)).dump());
    EXPECT_TRUE(j["sun_witness"].is_null());
    EXPECT_EQ(j["div_witness"], 1);
}
