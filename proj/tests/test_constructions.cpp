#include "amseq/constructions.hpp"
#include "amseq/ideals.hpp"
#include "amseq/parse.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace amseq;

namespace {

std::string strip_point_zero(std::string s) {
    if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
    return s;
}

void expect_all_ok(const ConstructionCertificate& c) {
    EXPECT_TRUE(c.ok()) << c.name;
    for (auto& ch : c.checks) EXPECT_TRUE(ch.ok) << c.name << ": " << ch.name << " " << ch.detail;
}

}  // namespace

TEST(DropBlocks, DefaultRuleCertified) {
    auto [expr, cert] = example_45_iii(12);
    expect_all_ok(cert);
    EXPECT_EQ(print(expr), "pw(ex45iii)");
    EXPECT_EQ(symbolic_summability(expr), Summable::yes);
}

TEST(DropBlocks, DoublingRuleFailsAtThree) {
    auto rule = make_rule(
        "doubling", [](int k) { return mpz_class(mpz_class(1) << (k - 1)); },
        [](int k) {
            mpq_class e(1, 1);
            e /= mpq_class(mpz_class(1) << (3 * k));
            return e;
        },
        Summable::yes);
    EXPECT_THROW(example_45_iii(rule, 6), construction_error);
    auto [expr, cert] = example_45_iii(rule, 6, true);
    EXPECT_TRUE(cert.partial);
    auto* growth = cert.find("n_k >= k n_{k-1}");
    ASSERT_NE(growth, nullptr);
    EXPECT_FALSE(growth->ok);
    ASSERT_TRUE(growth->witness);
    EXPECT_EQ(*growth->witness, "3");
}

TEST(SquareTouch, BelowSquareWithTouchPoints) {
    auto [expr, cert] = example_422(6);
    expect_all_ok(cert);
    bool found = false;
    for (auto& [k, v] : cert.facts)
        if (k == "eta_{m_3}") {
            found = true;
            EXPECT_EQ(v, "1/1296");
        }
    EXPECT_TRUE(found);
}

TEST(SquareTouch, NotInSoftInteriorOfSquare) {
    auto [expr, cert] = example_422(6);
    auto r = se_member(compile(expr), PrincipalIdeal(omega_pow(2)), 1);
    EXPECT_EQ(r.verdict, Verdict::fails);
}

TEST(BlockMinorant, BlocksMatchOracle) {
    auto res = lemma_47_block_eta(lemma47_demo_xi(), lemma47_demo_alpha());
    expect_all_ok(res.certificate);
    auto rows = oracle::rows("lemma47_blocks.txt");
    ASSERT_GE(res.blocks.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(res.blocks[k].n, std::stoull(rows[k][1])) << "block " << k + 1;
        EXPECT_EQ(res.blocks[k].m, std::stoull(rows[k][2])) << "block " << k + 1;
        EXPECT_NEAR(static_cast<double>(res.blocks[k].block_sum), std::stod(rows[k][3]), 1e-9) << "block " << k + 1;
        double lo = std::ldexp(1.0, -static_cast<int>(k)), hi = 2 * lo;
        EXPECT_GE(static_cast<double>(res.blocks[k].block_sum), lo);
        EXPECT_LE(static_cast<double>(res.blocks[k].block_sum), hi);
    }
}

TEST(BlockMinorant, Preconditions) {
    EXPECT_THROW(lemma_47_block_eta(omega_pow(2), lemma47_demo_alpha()), domain_error);
    EXPECT_THROW(lemma_47_block_eta(lemma47_demo_xi(), scale(mpq_class(1, 2), geom(mpq_class(1, 2)))), domain_error);
    // the demo needs about 7.4e5 indices for six blocks
    EXPECT_THROW(lemma_47_block_eta(lemma47_demo_xi(), lemma47_demo_alpha(), 500), domain_error);
}

TEST(IrregularMinorant, LevelsMatchOracle) {
    auto t = theorem_78_xi(omega_pow(0.5), 20);
    expect_all_ok(t.certificate);
    auto rows = oracle::rows("thm78_levels.txt");
    ASSERT_EQ(t.p_list.size(), rows.size());
    for (std::size_t l = 0; l < rows.size(); ++l)
        EXPECT_EQ(big_str(t.p_list[l]), strip_point_zero(rows[l][1])) << "level " << l + 1;
}

TEST(IrregularMinorant, Rejections) {
    EXPECT_THROW(theorem_78_xi(omega(), 5), domain_error);
    EXPECT_THROW(theorem_78_xi(omega_pow(2), 5), domain_error);
    EXPECT_THROW(theorem_78_xi(geom(mpq_class(1, 2)), 5), domain_error);
}

TEST(IrregularMinorant, LadderMatchesOracle) {
    auto base = theorem_78_xi(omega_pow(0.5), 20);
    auto fam = theorem_78_family(base, 3, 4);
    expect_all_ok(fam.certificate);
    auto rows = oracle::rows("thm78_ladder.txt");
    ASSERT_EQ(fam.ladders.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (int j = 1; j <= 3; ++j) {
            auto& cell = rows[k][static_cast<std::size_t>(j)];
            auto colon = cell.find(':');
            auto& [m, n] = fam.ladders[k][static_cast<std::size_t>(j - 1)];
            EXPECT_EQ(big_str(m), strip_point_zero(cell.substr(0, colon))) << "k=" << k + 1 << " j=" << j;
            EXPECT_EQ(big_str(n), strip_point_zero(cell.substr(colon + 1))) << "k=" << k + 1 << " j=" << j;
        }
        EXPECT_EQ(big_str(fam.m_next[k]), strip_point_zero(rows[k][4])) << "k=" << k + 1;
    }
}

TEST(IrregularMinorant, DegenerateFamily) {
    auto base = theorem_78_xi(omega_pow(0.5), 8);
    auto fam = theorem_78_family(base, 1, 3);
    expect_all_ok(fam.certificate);
    EXPECT_NE(fam.certificate.find("degenerate family {xi}"), nullptr);
}

TEST(IrregularMinorant, LevelBudgetEnforced) {
    auto base = theorem_78_xi(omega_pow(0.5), 8);
    EXPECT_THROW(theorem_78_family(base, 3, 8, 10), construction_error);
}

TEST(Dixmier, HarmonicHasGap) { EXPECT_EQ(dixmier_gap_check(omega()).verdict, Verdict::holds); }

TEST(Dixmier, SqrtIsRegular) { EXPECT_EQ(dixmier_gap_check(omega_pow(0.5)).verdict, Verdict::fails); }

TEST(StrictnessWitness, SmallCases) {
    auto [xi2, c2] = remark_42_witness(2);
    expect_all_ok(c2);
    bool seen = false;
    for (auto& [k, v] : c2.facts)
        if (k == "(D_2 xi_ainf)_{2j-1}") {
            seen = true;
            EXPECT_EQ(v, "1/2");
        }
    EXPECT_TRUE(seen);
    auto [xi5, c5] = remark_42_witness(5);
    expect_all_ok(c5);
    for (auto& [k, v] : c5.facts)
        if (k == "(D_2 xi_ainf)_{2j-1}") {
            EXPECT_EQ(v, "4/5");
        }
    EXPECT_THROW(remark_42_witness(1), domain_error);
}

TEST(Certificate, FindAndPartial) {
    ConstructionCertificate c;
    c.check("a", true);
    c.check("b", false, "bad", std::string("7"));
    EXPECT_FALSE(c.ok());
    EXPECT_EQ(c.find("b")->witness.value(), "7");
    EXPECT_EQ(c.find("zzz"), nullptr);
}
