#include "amseq/classify.hpp"
#include "amseq/parse.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace amseq;

namespace {

Sequence seq(const std::string& text) { return compile(parse(text)); }

constexpr index_t W = default_window;

}  // namespace

TEST(DeltaHalf, PowerHoldsWithConstant) {
    for (double p : {0.5, 1.0, 2.0}) {
        auto r = check_delta_half(omega_pow(p));
        EXPECT_EQ(r.verdict, Verdict::holds) << p;
        ASSERT_TRUE(r.constant);
        EXPECT_NEAR(static_cast<double>(*r.constant), std::pow(2.0, p), 1e-9) << p;
    }
}

TEST(DeltaHalf, GeometricFails) {
    auto r = check_delta_half(geom(mpq_class(1, 3)));
    EXPECT_EQ(r.verdict, Verdict::fails);
    EXPECT_TRUE(r.witness);
}

TEST(DeltaHalf, FiniteSupportInconclusive) {
    auto r = check_delta_half(finite_sequence({1, 1, 1}));
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    EXPECT_FALSE(r.notes.empty());
}

TEST(Regular, SqrtHoldsNearTwo) {
    auto v = oracle::values("seq_values.txt");
    auto r = check_regular(omega_pow(0.5));
    EXPECT_EQ(r.verdict, Verdict::holds);
    ASSERT_TRUE(r.constant);
    EXPECT_NEAR(static_cast<double>(*r.constant), 2.0, 0.01);
    // last trend point is the ratio at the window end
    EXPECT_NEAR(static_cast<double>(r.trend[2]), static_cast<double>(v.at("omega0.5_mean_ratio_2^20")), 1e-9);
}

TEST(Regular, HarmonicFails) { EXPECT_EQ(check_regular(omega()).verdict, Verdict::fails); }

TEST(Regular, UnitMassFailsAtTwo) {
    auto r = check_regular(finite_sequence({1}));
    EXPECT_EQ(r.verdict, Verdict::fails);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(*r.witness, 2u);
}

TEST(InftyRegular, Catalog) {
    EXPECT_EQ(check_infty_regular(omega_pow(2)).verdict, Verdict::holds);
    EXPECT_EQ(check_infty_regular(geom(mpq_class(1, 2))).verdict, Verdict::holds);
    EXPECT_EQ(check_infty_regular(seq("omega*log^-2")).verdict, Verdict::fails);
    EXPECT_THROW(check_infty_regular(omega()), summability_error);
}

TEST(Indices, PowersWithinTolerance) {
    for (double p : {0.5, 2.0}) {
        auto e = matuszewska_indices(omega_pow(p), W, 1 << 12);
        EXPECT_NEAR(static_cast<double>(e.alpha), -p, 0.05);
        EXPECT_NEAR(static_cast<double>(e.beta), -p, 0.05);
    }
}

TEST(Indices, GeometricFlagsMinusInfinity) {
    auto e = matuszewska_indices(geom(mpq_class(1, 2)), W, 1 << 12);
    EXPECT_TRUE(e.alpha_to_minus_infinity);
}

TEST(Indices, LogClassExtendedPath) {
    auto e = extended_indices(seq("omega*log^-2"));
    EXPECT_TRUE(e.extended);
    EXPECT_NEAR(static_cast<double>(e.alpha), -1.0, 0.05);
    EXPECT_NEAR(static_cast<double>(e.beta), -1.0, 0.05);
}

TEST(AnalyticBounds, OmegaSquaredAlphaUpper) {
    auto b = analytic_bounds(omega_pow(2));
    ASSERT_TRUE(b.alpha_upper);
    EXPECT_LE(static_cast<double>(*b.alpha_upper), -2.0 + 1e-3);
}

TEST(AnalyticBounds, SqrtBetaLower) {
    auto b = analytic_bounds(omega_pow(0.5));
    ASSERT_TRUE(b.beta_lower);
    EXPECT_NEAR(static_cast<double>(*b.beta_lower), -0.5, 0.01);
    EXPECT_FALSE(b.alpha_upper);
}

TEST(Potter, Examples) {
    EXPECT_EQ(potter_fit(omega_pow(2), 1.5).verdict, Verdict::holds);
    EXPECT_EQ(potter_fit(omega_pow(2), 2.5).verdict, Verdict::fails);
    auto eq = potter_fit(omega(), 1.0);
    EXPECT_EQ(eq.verdict, Verdict::holds);
    ASSERT_TRUE(eq.constant);
    EXPECT_NEAR(static_cast<double>(*eq.constant), 1.0, 1e-12);
}

TEST(Varga, OmegaSquaredHolds) {
    auto v = oracle::values("seq_values.txt");
    auto r = varga_check(omega_pow(2), 2);
    EXPECT_EQ(r.ratio.verdict, Verdict::holds);
    EXPECT_EQ(r.positivity.verdict, Verdict::holds);
    // the running inf is reached at n = 1; the pointwise ratio at the window end tends to 4
    EXPECT_GT(r.ratio.trend[2], 3.2L);
    auto A = am_infinity(omega_pow(2));
    index_t n = index_t{1} << 19;
    long double at_end = std::exp(A.log_value(n) - A.log_value(2 * n));
    EXPECT_NEAR(static_cast<double>(at_end), static_cast<double>(v.at("omega2_varga2_2^19")), 1e-9);
}

TEST(Varga, LogClassFailsStrictInequality) {
    auto v = oracle::values("seq_values.txt");
    auto r = varga_check(seq("omega*log^-2"), 2);
    EXPECT_EQ(r.ratio.verdict, Verdict::fails);
    // the inf sits at the window end and approaches 2 from above
    EXPECT_NEAR(static_cast<double>(r.ratio.trend[2]), static_cast<double>(v.at("omega_log2_varga2_2^19")), 1e-6);
    EXPECT_THROW(varga_check(omega_pow(2), 1), domain_error);
}

TEST(CrossCheck, PowerAllHold) {
    auto c = cross_check_412(omega_pow(2));
    EXPECT_TRUE(c.agreement);
    EXPECT_TRUE(c.complete);
    EXPECT_EQ(c.consensus, Verdict::holds);
    for (auto& r : c.conditions) EXPECT_EQ(r.verdict, Verdict::holds) << r.property;
}

TEST(CrossCheck, LogClassAllFail) {
    auto c = cross_check_412(seq("omega*log^-2"));
    EXPECT_TRUE(c.agreement);
    EXPECT_TRUE(c.complete);
    EXPECT_EQ(c.consensus, Verdict::fails);
    EXPECT_EQ(c.at("iii").verdict, Verdict::fails);
}

TEST(CrossCheck, NonSummableRejected) { EXPECT_THROW(cross_check_412(omega()), summability_error); }
