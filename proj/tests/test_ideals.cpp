#include "amseq/ideals.hpp"
#include "amseq/parse.hpp"

#include <gtest/gtest.h>

using namespace amseq;

namespace {

PrincipalIdeal ideal(const std::string& text) { return PrincipalIdeal(parse(text)); }
Sequence seq(const std::string& text) { return compile(parse(text)); }

}  // namespace

TEST(Member, SquareInsideHarmonic) {
    auto r = member(omega_pow(2), ideal("omega"));
    EXPECT_EQ(r.verdict, Verdict::holds);
    ASSERT_TRUE(r.m);
    EXPECT_EQ(*r.m, 1u);
    ASSERT_TRUE(r.constant);
    EXPECT_NEAR(static_cast<double>(*r.constant), 1.0, 1e-12);
}

TEST(Member, HarmonicOutsideSquare) {
    auto r = member(omega(), ideal("omega^2"));
    EXPECT_EQ(r.verdict, Verdict::fails);
}

TEST(Member, AmpliationFoundAtFive) {
    auto r = member(seq("D5(omega^2)"), ideal("omega^2"));
    EXPECT_EQ(r.verdict, Verdict::holds);
    ASSERT_TRUE(r.m);
    EXPECT_EQ(*r.m, 5u);
    EXPECT_NEAR(static_cast<double>(*r.constant), 1.0, 1e-12);
}

TEST(Member, MSetIncludesSmallIntegers) {
    auto ms = membership_ms(64);
    EXPECT_NE(std::find(ms.begin(), ms.end(), 5u), ms.end());
    EXPECT_EQ(ms.back(), 64u);
    EXPECT_THROW(membership_ms(0), domain_error);
}

TEST(SeMember, SoftInteriorOfHarmonic) {
    EXPECT_EQ(se_member(omega_pow(2), ideal("omega")).verdict, Verdict::holds);
    // every m leaves a positive limit 1/m; the largest m converges too slowly to call
    auto r = se_member(omega(), ideal("omega"));
    EXPECT_NE(r.verdict, Verdict::holds);
    EXPECT_EQ(se_member(omega(), ideal("omega"), 1).verdict, Verdict::fails);
}

TEST(PrincipalAm, HarmonicGoesUpOneLogLevel) {
    auto up = principal_am(ideal("omega"));
    EXPECT_TRUE(equal_at_depth(up, PrincipalIdeal(arithmetic_mean(omega()))));
    EXPECT_EQ(member(seq("omega*log"), up).verdict, Verdict::holds);
    // ln n stays below the large ampliations inside the window, so those stay undecided
    auto back = member(up.generator, ideal("omega"));
    EXPECT_NE(back.verdict, Verdict::holds);
    EXPECT_EQ(member(up.generator, ideal("omega"), 8).verdict, Verdict::fails);
}

TEST(PrincipalAmInfty, GeometricExact) {
    auto img = principal_am_infty(ideal("geom(1/2)"));
    ASSERT_TRUE(std::holds_alternative<PrincipalIdeal>(img));
    auto& g = std::get<PrincipalIdeal>(img).generator;
    for (index_t n = 1; n <= 30; ++n) {
        mpq_class want(1, n);
        want /= mpq_class(mpz_class(1) << static_cast<unsigned>(n));
        EXPECT_EQ(g.exact_or_throw(n), want);
    }
}

TEST(PrincipalAmInfty, NonSummableGivesSeOmega) {
    EXPECT_TRUE(std::holds_alternative<SeOmega>(principal_am_infty(ideal("omega^0.5"))));
}

TEST(Towers, AmUpper) {
    auto t = am_upper_tower(2);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(print(t[0]), "omega");
    EXPECT_EQ(print(t[1]), "omega*log");
    EXPECT_EQ(print(t[2]), "omega*log^2");
    EXPECT_EQ(stabilizer_tower(TowerKind::am_infty_lower, 1).back(), "L(sigma(log^1))");
}

TEST(Towers, AmInftyLowerMembership) {
    auto e = parse("omega*log^-5");
    for (auto& lvl : am_infty_lower_tower(3)) EXPECT_EQ(lvl.contains(e), Summable::yes) << lvl.m;
    EXPECT_EQ(lorentz_member(e, 4), Summable::no);
    for (auto& lvl : am_infty_lower_tower(4)) EXPECT_EQ(lvl.contains(parse("omega^2")), Summable::yes);
}

TEST(ThreeWay, Classes) {
    EXPECT_EQ(three_way_class(ideal("omega^2"), 3).value, SizeClass::small);
    EXPECT_EQ(three_way_class(ideal("omega^0.5"), 3).value, SizeClass::large);
    EXPECT_EQ(three_way_class(ideal("omega*log^-2"), 3).value, SizeClass::intermediate);
    EXPECT_THROW(three_way_class(PrincipalIdeal(omega()), 1), domain_error);
}

TEST(Trace, Dimensions) {
    struct Case {
        const char* text;
        TraceDim want;
    };
    for (auto [text, want] : {Case{"omega^0.5", TraceDim::zero}, Case{"omega^2", TraceDim::one},
                              Case{"omega", TraceDim::uncountable}, Case{"omega*log^-2", TraceDim::uncountable},
                              Case{"geom(1/2)", TraceDim::one}}) {
        auto t = trace_dimension(ideal(text));
        EXPECT_EQ(t.value, want) << text;
        EXPECT_FALSE(t.chain.empty()) << text;
        for (auto& [step, v] : t.chain) EXPECT_NE(v, "inconclusive") << text << " " << step;
    }
}

TEST(AlphaBar, DecreasesForHarmonic) {
    auto r = alpha_bar_check(omega(), omega_pow(0.5), 1 << 14);
    EXPECT_EQ(r.verdict, Verdict::holds);
    EXPECT_THROW(alpha_bar_check(omega_pow(2), omega()), domain_error);
}
