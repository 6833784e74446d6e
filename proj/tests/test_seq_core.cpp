#include "amseq/parse.hpp"
#include "amseq/transforms.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace amseq;

namespace {

Sequence seq(const std::string& text) { return compile(parse(text)); }

mpq_class q(long a, long b = 1) { return mpq_class(a, b); }

void expect_bracket(const TailSum& t, long double ref, long double rel) {
    EXPECT_LE(t.lo, ref * (1 + rel)) << "lo above reference";
    EXPECT_GE(t.hi, ref * (1 - rel)) << "hi below reference";
    EXPECT_NEAR(static_cast<double>(t.mid() / ref), 1.0, static_cast<double>(rel));
}

}  // namespace

TEST(Eval, HarmonicGeometricAndAmpliation) {
    EXPECT_EQ(omega().exact_or_throw(4), q(1, 4));
    EXPECT_EQ(geom(q(1, 2)).exact_or_throw(3), q(1, 8));
    EXPECT_EQ(ampliation(omega(), 2).exact_or_throw(3), q(1, 2));
    EXPECT_EQ(ampliation(omega(), 3).exact_or_throw(7), q(1, 3));
    EXPECT_EQ(dilution(omega(), 2).exact_or_throw(5), q(1, 10));
}

TEST(Eval, IndexZeroRejected) {
    EXPECT_THROW(omega().value(0), domain_error);
    EXPECT_THROW(ampliation(omega(), 0), domain_error);
}

TEST(Eval, LogSpaceSurvivesUnderflow) {
    auto g = geom(q(1, 2));
    index_t n = index_t{1} << 20;
    EXPECT_NEAR(static_cast<double>(g.log_value(n)), -static_cast<double>(n) * std::log(2.0), 1e-6);
}

TEST(ArithmeticMean, UnitMassGivesOmega) {
    auto e1 = finite_sequence({q(1)});
    auto a = arithmetic_mean(e1);
    for (index_t n : {1, 2, 3, 17, 1000}) EXPECT_EQ(a.exact_or_throw(n), q(1, n));
}

TEST(ArithmeticMean, OmegaAtFour) {
    // (1 + 1/2 + 1/3 + 1/4) / 4
    EXPECT_EQ(arithmetic_mean(omega()).exact_or_throw(4), q(25, 48));
}

TEST(ArithmeticMean, ConstantIsFixed) {
    auto c = finite_sequence(std::vector<mpq_class>(50, q(3, 7)));
    auto a = arithmetic_mean(c);
    for (index_t n = 1; n <= 50; ++n) EXPECT_EQ(a.exact_or_throw(n), q(3, 7));
}

TEST(AmInfinity, UnitMassGivesZero) {
    auto a = am_infinity(finite_sequence({q(1)}));
    for (index_t n : {1, 2, 10, 1000}) {
        EXPECT_EQ(a.exact_or_throw(n), q(0));
        EXPECT_EQ(a.value(n), 0.0L);
    }
}

TEST(AmInfinity, GeometricClosedForm) {
    // Σ_{j>n} 2^{-j} = 2^{-n}
    auto a = am_infinity(geom(q(1, 2)));
    for (index_t n = 1; n <= 40; ++n) {
        mpq_class want(1, n);
        want /= mpq_class(mpz_class(1) << static_cast<unsigned>(n));
        EXPECT_EQ(a.exact_or_throw(n), want) << n;
    }
}

TEST(AmInfinity, NonSummableRejected) { EXPECT_THROW(am_infinity(omega()).value(3), summability_error); }

TEST(AmInfinity, OmegaSquaredRatioNearOne) {
    auto v = oracle::values("seq_values.txt");
    index_t n = index_t{1} << 20;
    auto s = omega_pow(2);
    auto a = am_infinity(s);
    long double r = std::exp(a.log_value(n) - s.log_value(n));
    EXPECT_NEAR(static_cast<double>(r), static_cast<double>(v.at("omega2_ainf_ratio_2^20")), 1e-11);
}

TEST(AmInfinity, LogClassAgainstOracle) {
    auto v = oracle::values("seq_values.txt");
    auto a = am_infinity(seq("omega*log^-2"));
    EXPECT_NEAR(static_cast<double>(a.value(1024) / v.at("omega_log2_ainf_1024")), 1.0, 1e-10);
}

TEST(Tail, GeometricExact) {
    auto t = geom(q(1, 2)).tail(4);
    ASSERT_TRUE(t.is_exact());
    EXPECT_EQ(*t.exact, q(1, 16));
}

TEST(Tail, FinitePastSupportIsZero) {
    auto t = finite_sequence({q(1), q(1, 2), q(1, 3)}).tail(5);
    ASSERT_TRUE(t.is_exact());
    EXPECT_EQ(*t.exact, q(0));
}

TEST(Tail, HurwitzOracle) {
    auto v = oracle::values("seq_values.txt");
    expect_bracket(omega_pow(2).tail(10), v.at("omega2_tail_10"), 1e-10L);
    expect_bracket(omega_pow(2).tail(1000), v.at("omega2_tail_1000"), 1e-10L);
    expect_bracket(omega_pow(1.5).tail(100), v.at("omega1.5_tail_100"), 1e-10L);
    expect_bracket(seq("omega*log^-2").tail(1000), v.at("omega_log2_tail_1000"), 1e-10L);
}

TEST(Tail, BracketWidthRespectsTolerance) {
    auto t = omega_pow(2).tail(10, 1e-12L);
    EXPECT_LE(t.rel_width(), 1e-12L);
    EXPECT_LE(t.lo, t.hi);
}

TEST(Tail, NonSummableUnavailable) { EXPECT_ANY_THROW(omega().tail(10)); }

TEST(GeometricMean, ConstantIsFixed) {
    auto g = geometric_mean(finite_sequence(std::vector<mpq_class>(20, q(5))));
    for (index_t n = 1; n <= 20; ++n) EXPECT_NEAR(static_cast<double>(g.value(n)), 5.0, 1e-15);
}

TEST(GeometricMean, HarmonicOracle) {
    auto v = oracle::values("seq_values.txt");
    EXPECT_NEAR(static_cast<double>(geometric_mean(omega()).value(1024) / v.at("omega_gm_1024")), 1.0, 1e-12);
}

TEST(Monotonize, Rearranges) {
    auto m = monotonize({q(0), q(3), q(1), q(3)});
    std::vector<mpq_class> want{q(3), q(3), q(1), q(0), q(0), q(0)};
    for (index_t n = 1; n <= want.size(); ++n) EXPECT_EQ(m.exact_or_throw(n), want[n - 1]);
}

TEST(Monotonize, NegativeRejected) { EXPECT_THROW(monotonize({q(1), q(-1)}), domain_error); }

TEST(UpperEnvelope, SmallestMajorant) {
    auto e = upper_envelope_values({q(1), q(3), q(2), q(0), q(1)});
    std::vector<mpq_class> want{q(3), q(3), q(2), q(1), q(1)};
    EXPECT_EQ(e, want);
}

TEST(Identities, RandomPrefixesExact) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<mpq_class> raw;
        for (int i = 0; i < 200; ++i) raw.emplace_back(static_cast<long>(rng() % 1000), static_cast<long>(1 + rng() % 64));
        for (auto& r : raw) r.canonicalize();
        auto s = monotonize(raw);
        auto a = arithmetic_mean(s), b = am_infinity(s);
        mpq_class total = 0;
        for (auto& r : raw) total += r;
        for (index_t n = 2; n <= 220; ++n) {
            mpq_class nn(static_cast<long>(n));
            EXPECT_EQ(nn * a.exact_or_throw(n), s.exact_or_throw(n) + (nn - 1) * a.exact_or_throw(n - 1));
            EXPECT_EQ((nn - 1) * b.exact_or_throw(n - 1), s.exact_or_throw(n) + nn * b.exact_or_throw(n));
            EXPECT_EQ(a.exact_or_throw(n) + b.exact_or_throw(n), total / nn);
        }
    }
}

TEST(Summability, SymbolicRules) {
    EXPECT_EQ(symbolic_summability(parse("omega^2")), Summable::yes);
    EXPECT_EQ(symbolic_summability(parse("omega")), Summable::no);
    EXPECT_EQ(symbolic_summability(parse("omega*log^-1")), Summable::no);
    EXPECT_EQ(symbolic_summability(parse("omega*log^-1.01")), Summable::yes);
    EXPECT_EQ(symbolic_summability(parse("geom(3/4)")), Summable::yes);
    EXPECT_EQ(symbolic_summability(parse("pw(ex45iii)")), Summable::yes);
}

TEST(Lorentz, IntegralTestRule) {
    EXPECT_EQ(lorentz_member(parse("omega*log^-3"), 1), Summable::yes);
    EXPECT_EQ(lorentz_member(parse("omega*log^-2"), 1), Summable::no);
    for (int m = 0; m <= 4; ++m) EXPECT_EQ(lorentz_member(parse("geom(1/2)"), m), Summable::yes);
}

TEST(Parse, RoundTrip) {
    for (const char* text : {"omega", "omega^2", "omega*log^-2", "geom(1/3)", "D3(omega)", "Dinv2(omega^0.5)",
                             "scale(2,geom(1/2))", "min(omega^2,geom(1/2))", "max(omega,omega^2)",
                             "sum(omega^2,geom(1/4))", "override([1,1/2],omega^2)", "pw(ex45iii)"}) {
        auto e = parse(text);
        EXPECT_EQ(parse(print(e)), e) << text;
    }
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        parse("omega^^2");
        FAIL() << "no error";
    } catch (const parse_error& e) {
        EXPECT_GE(e.position, 0u);
    }
    EXPECT_THROW(parse("geom(2)"), domain_error);
    EXPECT_THROW(parse("pw(nope)"), domain_error);
}

TEST(PrefixFile, CommentsAndRationals) {
    std::istringstream in("# header\n1\n1/2\n\n0.25  # quarter\n");
    auto f = read_prefix_stream(in, "mem", false);
    std::vector<mpq_class> want{q(1), q(1, 2), q(1, 4)};
    EXPECT_EQ(f.values, want);
    EXPECT_FALSE(f.monotonized);
}

TEST(PrefixFile, MonotonizeOptIn) {
    std::istringstream bad("1\n2\n");
    EXPECT_THROW(read_prefix_stream(bad, "mem", false), domain_error);
    std::istringstream again("1\n2\n");
    auto f = read_prefix_stream(again, "mem", true);
    EXPECT_TRUE(f.monotonized);
    EXPECT_EQ(f.values.front(), q(2));
}
