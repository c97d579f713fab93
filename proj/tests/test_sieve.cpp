#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "pikn/sieve.hpp"

using namespace pikn;

namespace {

std::vector<std::uint64_t> primes_of(const PrimeTable& t) {
    std::vector<std::uint64_t> out;
    t.for_each_prime([&](std::uint64_t p) { out.push_back(p); });
    return out;
}

}  // namespace

TEST(SieveRange, FirstPrimes) {
    auto t = sieve_range(0, 11);
    EXPECT_EQ(primes_of(t), (std::vector<std::uint64_t>{2, 3, 5, 7}));
    EXPECT_EQ(t.count(), 4u);
}

TEST(SieveRange, SingleElementRangeHasNoPrimes) {
    auto t = sieve_range(0, 1);
    EXPECT_EQ(t.count(), 0u);
    EXPECT_FALSE(t.test(0));
}

TEST(SieveRange, NinetyToHundred) {
    auto t = sieve_range(90, 100);
    EXPECT_EQ(primes_of(t), (std::vector<std::uint64_t>{97}));
    for (std::uint64_t x = 90; x < 100; ++x) EXPECT_EQ(t.test(x), oracle::is_prime_trial(x)) << x;
}

TEST(SieveRange, RejectsEmptyAndOverBudget) {
    EXPECT_THROW(sieve_range(5, 5), DomainError);
    EXPECT_THROW(sieve_range(10, 3), DomainError);
    SieveOptions tight;
    tight.memory_budget = 1024;
    EXPECT_THROW(sieve_range(0, 1'000'000, tight), BudgetError);
}

TEST(SieveRange, BitsMatchTrialDivisionUpToOneMillion) {
    constexpr std::uint64_t limit = 1'000'000;
    auto t = sieve_range(0, limit);
    auto ref = oracle::primality_upto(limit - 1);
    std::uint64_t ref_count = 0;
    for (std::uint64_t x = 0; x < limit; ++x) {
        ASSERT_EQ(t.test(x), static_cast<bool>(ref[x])) << x;
        ref_count += ref[x];
    }
    EXPECT_EQ(t.count(), ref_count);
    EXPECT_EQ(t.count(), 78498u);
}

TEST(SieveRange, CountsMatchOracleForManyPrefixes) {
    auto pi = oracle::pi_table(1'000'000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> hi_dist(1, 1'000'000);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t hi = hi_dist(rng);
        SieveOptions opts;
        opts.segment_size = 1 + rng() % 5000;
        ASSERT_EQ(sieve_range(0, hi, opts).count(), pi[hi - 1]) << hi;
    }
}

TEST(SieveRange, CountRangeMatchesOracle) {
    auto t = sieve_range(1000, 50'000);
    auto pi = oracle::pi_table(50'000);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        std::uint64_t a = 900 + rng() % 49'200, b = 900 + rng() % 49'200;
        if (a > b) std::swap(a, b);
        std::uint64_t ca = std::max<std::uint64_t>(a, 1000), cb = std::min<std::uint64_t>(b, 50'000);
        std::uint64_t expect = ca < cb ? pi[cb - 1] - pi[ca - 1] : 0;
        ASSERT_EQ(t.count_range(a, b), expect) << a << " " << b;
    }
}

TEST(SieveRange, ThreadCountDoesNotChangeBits) {
    SieveOptions one, many;
    one.segment_size = many.segment_size = 4096;
    many.threads = 8;
    EXPECT_EQ(sieve_range(12345, 2'000'000, one), sieve_range(12345, 2'000'000, many));
}

TEST(SieveRange, HighRangeAgreesWithMillerRabin) {
    const std::uint64_t lo = (std::uint64_t{1} << 50) - 12345;
    auto t = sieve_range(lo, lo + 200'000);
    for (std::uint64_t x = lo; x < lo + 200'000; ++x) ASSERT_EQ(t.test(x), is_prime(x)) << x;
}

TEST(SegmentPlan, TilesSpanExactly) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t lo = rng() % 1'000'000, len = 1 + rng() % 100'000, seg = 1 + rng() % 7000;
        auto plan = SegmentPlan::make(lo, lo + len, seg);
        EXPECT_GE(static_cast<unsigned __int128>(plan.base_primes_bound) * plan.base_primes_bound,
                  plan.span_hi);
        std::uint64_t cursor = lo;
        for (std::uint64_t s = 0; s < plan.segment_count(); ++s) {
            auto [a, b] = plan.segment(s);
            ASSERT_EQ(a, cursor);
            ASSERT_LT(a, b);
            ASSERT_LE(b - a, seg);
            cursor = b;
        }
        ASSERT_EQ(cursor, lo + len);
    }
}

TEST(SegmentPlan, SegmentedSweepEqualsSingleTable) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        std::uint64_t lo = rng() % 10'000'000, len = 1 + rng() % 100'000;
        SieveOptions opts;
        opts.segment_size = 1 + rng() % 9000;
        opts.threads = 1 + static_cast<unsigned>(rng() % 4);
        auto whole = sieve_range(lo, lo + len);
        std::uint64_t cursor = lo;
        sweep(lo, lo + len, opts, [&](const PrimeTable& seg) {
            EXPECT_EQ(seg.lo(), cursor);
            for (std::uint64_t x = seg.lo(); x < seg.hi(); ++x)
                if (seg.test(x) != whole.test(x)) {
                    ADD_FAILURE() << "mismatch at " << x;
                    return false;
                }
            cursor = seg.hi();
            return true;
        });
        EXPECT_EQ(cursor, lo + len);
    }
}

TEST(IsPrime, KnownValuesAndSmallCases) {
    EXPECT_TRUE(is_prime(17));
    EXPECT_TRUE(is_prime(19));
    EXPECT_FALSE(is_prime(0));
    EXPECT_FALSE(is_prime(1));
    EXPECT_TRUE(is_prime(2));
    EXPECT_FALSE(is_prime(25));
}

TEST(IsPrime, MersenneAndStrongPseudoprimes) {
    EXPECT_TRUE(is_prime((std::uint64_t{1} << 61) - 1));
    EXPECT_FALSE(is_prime((std::uint64_t{1} << 59) - 1));  // 179951 * 3203431780337
    EXPECT_TRUE(is_prime(UINT64_MAX - 58));
    EXPECT_FALSE(is_prime(UINT64_MAX));
    // strong pseudoprimes to several small bases
    EXPECT_FALSE(is_prime(3215031751ULL));
    EXPECT_FALSE(is_prime(3825123056546413051ULL));
    EXPECT_FALSE(is_prime(341550071728321ULL));
    EXPECT_FALSE(is_prime(4294967297ULL));  // 641 * 6700417
    EXPECT_FALSE(is_prime(4294967291ULL * 4294967279ULL));
}

TEST(IsPrime, AgreesWithTrialDivision) {
    for (std::uint64_t n = 0; n < 200'000; ++n) ASSERT_EQ(is_prime(n), oracle::is_prime_trial(n)) << n;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = rng() % 1'000'000'000'000ULL;
        ASSERT_EQ(is_prime(n), oracle::is_prime_trial(n)) << n;
    }
}

TEST(NthPrime, Examples) {
    EXPECT_EQ(nth_prime(1), 2u);
    EXPECT_EQ(nth_prime(6), 13u);
    EXPECT_EQ(nth_prime(25), 97u);
    EXPECT_EQ(nth_prime(1'000'000), 15'485'863u);
    EXPECT_THROW(nth_prime(0), DomainError);
    EXPECT_THROW(nth_prime(kPrimeCountU64 + 1), OverflowError);
}

TEST(NthPrime, IncreasingAndPrimeUpToTenThousand) {
    auto ref = oracle::primes_upto(200'000);
    ASSERT_GE(ref.size(), 10'000u);
    SieveOptions small;
    small.segment_size = 1000;
    std::uint64_t prev = 0;
    for (std::uint64_t k = 1; k <= 10'000; k += (k < 200 ? 1 : 97)) {
        std::uint64_t p = nth_prime(k, small);
        ASSERT_EQ(p, ref[k - 1]) << k;
        ASSERT_TRUE(is_prime(p));
        ASSERT_GT(p, prev);
        prev = p;
    }
    EXPECT_EQ(nth_prime(10'000), ref[9'999]);
}

TEST(PrimeStream, Examples) {
    PrimeStream s0(0);
    EXPECT_EQ(*s0.next(), 2u);
    EXPECT_EQ(*s0.next(), 3u);
    EXPECT_EQ(*s0.next(), 5u);
    EXPECT_EQ(*s0.next(), 7u);

    PrimeStream s14(14);
    EXPECT_EQ(*s14.next(), 17u);
    EXPECT_EQ(*s14.next(), 19u);

    PrimeStream big(1'000'000);
    EXPECT_EQ(*big.next(), 1'000'003u);
}

TEST(PrimeStream, NoOmissionsAcrossWindows) {
    SieveOptions opts;
    opts.segment_size = 1024;
    PrimeStream s(500, opts);
    auto ref = oracle::primes_upto(300'000);
    auto it = std::lower_bound(ref.begin(), ref.end(), 500u);
    for (; it != ref.end(); ++it) ASSERT_EQ(*s.next(), *it);
}

TEST(PrimeStream, EndsAtTopOfRange) {
    // 2^64 - k is prime for k = 95, 83, 59
    PrimeStream s(UINT64_MAX - 100);
    EXPECT_EQ(*s.next(), UINT64_MAX - 94);
    EXPECT_EQ(*s.next(), UINT64_MAX - 82);
    EXPECT_EQ(*s.next(), UINT64_MAX - 58);
    EXPECT_FALSE(s.next().has_value());
}
