#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "limsup/circle_set.hpp"
#include "limsup/error.hpp"
#include "limsup/overlap.hpp"
#include "limsup/sampling.hpp"

using namespace limsup;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

const PsiFunction& half() {
    static const PsiFunction psi = normalize_psi(PsiFunction::half());
    return psi;
}

PsiFunction constant_on(std::initializer_list<std::uint64_t> ns, const Rational& v) {
    std::map<std::uint64_t, Rational> table;
    for (auto n : ns) table[n] = v;
    return PsiFunction::from_table(table, 100000);
}

}  // namespace

TEST(Decompose, Examples) {
    const auto a = decompose_pair(12, 18, half());
    EXPECT_EQ(a.r, 1u);
    EXPECT_EQ(a.s, 6u);
    EXPECT_EQ(a.t, 36u);
    EXPECT_EQ(a.g, 6u);
    EXPECT_EQ(a.quotient.value, 6u);

    const auto b = decompose_pair(6, 10, half());
    EXPECT_EQ(b.r, 2u);
    EXPECT_EQ(b.s, 1u);
    EXPECT_EQ(b.t, 15u);

    const auto c = decompose_pair(3, 9, half());
    EXPECT_EQ(c.r, 1u);
    EXPECT_EQ(c.s, 3u);
    EXPECT_EQ(c.t, 9u);

    EXPECT_THROW(decompose_pair(5, 5, half()), DomainError);
}

TEST(Decompose, IdentitiesAgainstBruteForce) {
    for (std::uint64_t m = 2; m <= 150; ++m)
        for (std::uint64_t n = m + 1; n <= 150; ++n) {
            const auto d = decompose_pair(m, n, half());
            ASSERT_EQ(m * n, d.r * d.r * d.s * d.t);
            ASSERT_EQ(d.g, std::gcd(m, n));
            ASSERT_EQ(d.g, d.r * d.s);
            ASSERT_EQ(d.t % d.s, 0u);
            ASSERT_EQ(d.t / d.s, m * n / (d.g * d.g));
            ASSERT_EQ(d.quotient.value, d.t / d.s);
            ASSERT_EQ(d.delta, min(d.psi_m / Rational(m), d.psi_n / Rational(n)));
            ASSERT_EQ(d.Delta, max(d.psi_m / Rational(m), d.psi_n / Rational(n)));
            for (const auto& pp : d.ft.factors)
                ASSERT_NE(d.fm.exponent_of(pp.prime), d.fn.exponent_of(pp.prime));
        }
}

TEST(ScaledD, Examples) {
    EXPECT_EQ(scaled_D(decompose_pair(6, 10, half()), 0), q("5/2"));
    EXPECT_EQ(scaled_D(decompose_pair(2, 3, half()), 0), q("3/2"));
    EXPECT_EQ(scaled_D(decompose_pair(2, 3, PsiFunction::from_table({}, 10)), 0), Rational(0));
    EXPECT_EQ(scaled_D(decompose_pair(6, 10, half()), 2), q("5/2") / exp_rational(2));
}

TEST(PvBound, Examples) {
    EXPECT_EQ(pv_bound(decompose_pair(12, 18, half()), 0), Rational(3));
    EXPECT_EQ(pv_bound(decompose_pair(6, 10, half()), 0), q("15/8"));
    // D = 99/2 exceeds every prime of t/s = 2 * 101
    EXPECT_EQ(pv_bound(decompose_pair(99, 101 * 99 * 2, constant_on({99, 101 * 99 * 2}, q("1/2"))), 0), Rational(1));
}

TEST(ExactP, Examples) {
    EXPECT_EQ(exact_P(2, 3, half(), 0), q("3/2"));
    EXPECT_EQ(exact_P(2, 3, constant_on({2, 3}, q("1/100")), 0), Rational(0));
    EXPECT_EQ(exact_P(2, 3, half(), 1), Rational(0));
    EXPECT_THROW(exact_P(2, 3, constant_on({2}, q("1/4")), 0), UndefinedRatioError);
}

TEST(ExactP, Symmetric) {
    SeededRng rng(19);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t m = rng.in_range(2, 200), n = rng.in_range(2, 200);
        if (m == n) continue;
        const unsigned k = static_cast<unsigned>(rng.below(3));
        EXPECT_EQ(exact_P(m, n, half(), k), exact_P(n, m, half(), k));
        EXPECT_EQ(pv_bound(decompose_pair(m, n, half()), k), pv_bound(decompose_pair(n, m, half()), k));
    }
}

TEST(IntegralBound, Examples) {
    const auto d = decompose_pair(2, 3, half());
    EXPECT_EQ(integral_window(d, 0), Rational(6));
    const auto v = integral_bound(d, 0);
    EXPECT_NEAR(v.value(), 2 * (std::log(6.0) + std::log(1.2)), 1e-12);
    EXPECT_NEAR(v.value(), 3.948, 1e-3);
    EXPECT_EQ(integral_bound(d, 2).value(), 0.0);
    EXPECT_EQ(integral_bound(decompose_pair(2, 3, constant_on({2, 3}, q("1/100"))), 0).value(), 0.0);
}

TEST(Disjoint, Examples) {
    const auto tiny = decompose_pair(2, 3, constant_on({2, 3}, q("1/100")));
    EXPECT_TRUE(disjoint_predicted(tiny, 0));
    EXPECT_FALSE(disjoint_predicted(decompose_pair(2, 3, half()), 0));
    EXPECT_TRUE(disjoint_predicted(decompose_pair(2, 3, PsiFunction::from_table({}, 10)), 0));
}

TEST(Disjoint, PredicateImpliesEmptyIntersection) {
    SeededRng rng(23);
    OverlapEngine engine(half());
    int checked = 0;
    while (checked < 200) {
        const std::uint64_t m = rng.in_range(2, 400), n = rng.in_range(2, 400);
        if (m == n) continue;
        const unsigned k = static_cast<unsigned>(rng.below(8));
        const auto d = engine.decompose(m, n);
        if (!disjoint_predicted(d, k)) continue;
        ASSERT_EQ(engine.intersection(m, n, k), Rational(0)) << m << ' ' << n << ' ' << k;
        ++checked;
    }
}

TEST(Threshold, ClassesFollowWindow) {
    const auto d = decompose_pair(2, 3, half());  // 4 Delta r t = 6
    EXPECT_EQ(threshold_class(d, 0, 1), ThresholdClass::above_window);  // 6 >= e
    EXPECT_EQ(threshold_class(d, 0, 2), ThresholdClass::in_window);     // 6 < e^2
    EXPECT_EQ(threshold_class(d, 2, 2), ThresholdClass::below_one);     // 6/e^2 < 1
    EXPECT_EQ(to_string(ThresholdClass::in_window), "in-window");
}

TEST(Engine, RecordMatchesFreeFunctions) {
    OverlapEngine engine(half());
    for (auto [m, n] : PairList{{12, 18}, {6, 10}, {2, 3}, {16, 250}})
        for (unsigned k = 0; k <= 3; ++k) {
            const auto d = engine.decompose(m, n);
            const auto r = engine.record(d, k, 3);
            EXPECT_EQ(r.D_k, scaled_D(d, k));
            EXPECT_EQ(r.pv_product, pv_bound(d, k));
            EXPECT_EQ(r.P_exact, exact_P(m, n, half(), k));
            EXPECT_EQ(r.disjoint_predicted, disjoint_predicted(d, k));
            if (r.disjoint_predicted) EXPECT_EQ(r.P_exact, Rational(0));
        }
}

TEST(AveragedSum, Examples) {
    const auto a = averaged_sum(2, 3, half(), 3);
    EXPECT_EQ(a.total, Rational(0));
    ASSERT_EQ(a.per_k.size(), 3u);
    EXPECT_EQ(a.per_k.front().k, 1u);

    const auto z = averaged_sum(2, 3, constant_on({3}, q("1/2")), 4);
    EXPECT_EQ(z.total, Rational(0));
    for (const auto& r : z.per_k) EXPECT_EQ(r.P_exact, Rational(0));

    // log K = max(1, ln 3), log log 3 = max(1, log(max(1, ln 3))) = 1
    EXPECT_NEAR(a.endup_bound.value(), std::log(3.0), 1e-12);
}

TEST(AveragedSum, GridOracleDualPath) {
    const unsigned K = 2;
    const auto res = averaged_sum(6, 10, half(), K);
    const std::uint64_t M = 1000000;
    Rational oracle(0), slack(0);
    for (unsigned k = 1; k <= K; ++k) {
        const Rational e = exp_rational(k);
        const auto a = build_E(6, q("1/2") / e), b = build_E(10, q("1/2") / e);
        const Rational denom = measure(a) * measure(b);
        oracle += grid_oracle(a, b, M) / denom;
        slack += Rational(a.size() + b.size() + 2, M) / denom;
    }
    EXPECT_LE((res.total - oracle).abs(), slack);
}

TEST(AveragedSum, LargerPairAgainstOracle) {
    const unsigned K = 4;
    const auto res = averaged_sum(40, 60, half(), K);
    Rational direct(0);
    for (unsigned k = 1; k <= K; ++k) direct += exact_P(40, 60, half(), k);
    EXPECT_EQ(res.total, direct);
}
