#include "amseq/report.hpp"
#include "amseq/suites.hpp"

#include <gtest/gtest.h>

using namespace amseq;

TEST(Report, DefiniteByDefault) {
    Report r("classify");
    r.add("check", {{"verdict", "holds"}});
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.status(), "definite");
    auto b = r.body();
    EXPECT_EQ(b["schema"], report_schema);
    EXPECT_EQ(b["results"][0]["operation"], "check");
    EXPECT_FALSE(b.contains("timing"));
    EXPECT_TRUE(r.finish(0.5).contains("timing"));
}

TEST(Report, NestedInconclusiveFolds) {
    Report r("classify");
    r.add("cross", {{"consensus", "holds"}, {"conditions", json::array({{{"verdict", "inconclusive"}}})}});
    EXPECT_EQ(r.exit_code(), 2);
    Report t("classify");
    t.add("trace", {{"value", "unknown"}});
    EXPECT_EQ(t.status(), "inconclusive");
}

TEST(Report, ErrorsDominate) {
    Report r("member");
    r.add("x", {{"verdict", "inconclusive"}});
    r.error("boom");
    EXPECT_EQ(r.exit_code(), 1);
    EXPECT_EQ(r.body()["error"], "boom");
    Report h("verify");
    h.add("suite", {{"verdict", "fails"}}, true);
    EXPECT_EQ(h.status(), "failed");
    EXPECT_EQ(h.exit_code(), 1);
}

TEST(Report, SkipIsNotInconclusive) {
    Report r("classify");
    r.skip("trace_dimension", "not summable");
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.body()["results"][0]["skipped"], "not summable");
}

TEST(Report, NonFiniteRealsStayValidJson) {
    EXPECT_EQ(jreal(std::numeric_limits<real>::infinity()), "inf");
    EXPECT_EQ(jreal(-std::numeric_limits<real>::infinity()), "-inf");
    EXPECT_EQ(jreal(std::nan("")), "nan");
    EXPECT_EQ(jreal(0.25L), 0.25);
    EXPECT_TRUE(jopt(std::optional<real>{}).is_null());
}

TEST(Report, RenderText) {
    json doc{{"schema", report_schema}, {"list", {1, 2}}, {"obj", {{"a", "b"}}}};
    auto text = render_text(doc);
    EXPECT_NE(text.find("schema: amseq.report/1"), std::string::npos);
    EXPECT_NE(text.find("  1, 2"), std::string::npos);
    EXPECT_NE(text.find("  a: b"), std::string::npos);
}

TEST(Report, CertificateJson) {
    ConstructionCertificate c;
    c.name = "demo";
    c.check("a", true);
    c.check("b", false, "bad", std::string("9"));
    c.fact("k", "v");
    auto j = to_json(c);
    EXPECT_EQ(j["ok"], false);
    EXPECT_EQ(j["checks"][1]["verdict"], "fails");
    EXPECT_EQ(j["checks"][1]["witness"], "9");
    EXPECT_EQ(j["facts"]["k"], "v");
}

TEST(ParallelMap, KeepsOrderAndRethrows) {
    std::vector<int> xs(100);
    std::iota(xs.begin(), xs.end(), 0);
    auto ys = parallel_map(xs, 4, [](int x) { return x * x; });
    for (int i = 0; i < 100; ++i) EXPECT_EQ(ys[static_cast<std::size_t>(i)], i * i);
    EXPECT_THROW(parallel_map(xs, 3,
                              [](int x) {
                                  if (x == 42) throw std::runtime_error("x");
                                  return x;
                              }),
                 std::runtime_error);
}

TEST(Suites, NamesAndUnknown) {
    EXPECT_EQ(suite_names().back(), "all");
    EXPECT_THROW(run_suite("nope", SuiteConfig{}), domain_error);
}

TEST(Suites, SmallRunsPass) {
    SuiteConfig cfg;
    cfg.jobs = 1;
    auto id = suite_identities(cfg, 5, 300);
    EXPECT_TRUE(id.passed()) << to_json(id).dump();
    auto l41 = suite_lemma41(cfg, 500);
    EXPECT_TRUE(l41.passed()) << to_json(l41).dump();
    auto c43 = suite_cor43(cfg, 500);
    EXPECT_TRUE(c43.passed()) << to_json(c43).dump();
    auto lor = suite_lorentz(cfg);
    EXPECT_TRUE(lor.passed()) << to_json(lor).dump();
}

TEST(Suites, SameSeedSameOutcome) {
    SuiteConfig cfg;
    cfg.jobs = 1;
    auto a = to_json(suite_identities(cfg, 3, 100));
    auto b = to_json(suite_identities(cfg, 3, 100));
    EXPECT_EQ(a, b);
}

// Negative controls: the comparisons used by the suites do reject violations.

TEST(NegativeControl, ExactComparisonRejects) {
    auto a = finite_sequence({mpq_class(1), mpq_class(1, 2)});
    auto b = finite_sequence({mpq_class(1), mpq_class(1, 3)});
    EXPECT_TRUE(detail::le_at(b, a, 2, mpq_class(1), 0));
    EXPECT_FALSE(detail::le_at(a, b, 2, mpq_class(1), 0));
    EXPECT_TRUE(detail::le_at(a, b, 2, mpq_class(3, 2), 0));
    EXPECT_FALSE(detail::le_at(a, b, 2, mpq_class(3, 2) - mpq_class(1, 1000000), 0));
}

TEST(NegativeControl, LogComparisonRejects) {
    auto a = omega_pow(2), b = omega_pow(2.0000001);
    EXPECT_FALSE(detail::le_at(a, b, 100000, mpq_class(1), 1e-12L, false));
    EXPECT_TRUE(detail::le_at(b, a, 100000, mpq_class(1), 1e-12L, false));
}

TEST(NegativeControl, PerturbedPrefixBreaksIdentity) {
    std::vector<mpq_class> v{mpq_class(3), mpq_class(2), mpq_class(1)};
    auto s = finite_sequence(v);
    auto a = arithmetic_mean(s);
    // a mean off by 1e-6 breaks the recurrence
    mpq_class bad = a.exact_or_throw(3) + mpq_class(1, 1000000);
    EXPECT_NE(mpq_class(3) * bad, s.exact_or_throw(3) + 2 * a.exact_or_throw(2));
    EXPECT_EQ(mpq_class(3) * a.exact_or_throw(3), s.exact_or_throw(3) + 2 * a.exact_or_throw(2));
}

TEST(NegativeControl, WeakenedConstantFails) {
    // ξ_j <= 2 (D_2 ξ_{a∞})_j holds on ω²; with 1/8 in place of 2 it must not
    auto s = omega_pow(2);
    auto rhs = ampliation(am_infinity(s), 2);
    EXPECT_TRUE(detail::le_at(s, rhs, 1000, mpq_class(2), 1e-12L));
    EXPECT_FALSE(detail::le_at(s, rhs, 1000, mpq_class(1, 8), 1e-12L));
}
