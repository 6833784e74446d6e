// Runs the amseq binary and checks its report documents.

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

using json = nlohmann::ordered_json;

namespace {

struct Run {
    std::string out;
    int code = -1;
    json doc;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = (env.empty() ? "" : "env " + env + " ") + std::string(AMSEQ_TOOL) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.doc = json::parse(r.out, nullptr, false);
    return r;
}

std::string data(const std::string& name) { return std::string(AMSEQ_TEST_DATA) + "/" + name; }

const json* result(const json& doc, const std::string& op) {
    for (auto& r : doc["results"])
        if (r.value("operation", "") == op) return &r;
    return nullptr;
}

}  // namespace

TEST(Cli, ClassifySquare) {
    auto r = run("classify omega^2 --no-timing");
    ASSERT_FALSE(r.doc.is_discarded()) << r.out;
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.doc["schema"], "amseq.report/1");
    EXPECT_EQ(r.doc["status"], "definite");
    EXPECT_FALSE(r.doc.contains("timing"));
    EXPECT_EQ((*result(r.doc, "check_infty_regular"))["verdict"], "holds");
    EXPECT_EQ((*result(r.doc, "check_regular"))["verdict"], "fails");
    EXPECT_EQ((*result(r.doc, "trace_dimension"))["value"], "one");
}

TEST(Cli, ClassifyHarmonicAndGeometric) {
    auto h = run("classify omega --no-timing");
    EXPECT_EQ(h.code, 0);
    EXPECT_EQ((*result(h.doc, "check_regular"))["verdict"], "fails");
    EXPECT_EQ((*result(h.doc, "trace_dimension"))["value"], "uncountable");
    auto g = run("classify 'geom(1/3)' --no-timing");
    EXPECT_EQ(g.code, 0);
    EXPECT_EQ((*result(g.doc, "check_delta_half"))["verdict"], "fails");
    EXPECT_EQ((*result(g.doc, "check_infty_regular"))["verdict"], "holds");
}

TEST(Cli, DeterministicWithoutTiming) {
    auto a = run("member omega^2 omega --no-timing");
    auto b = run("member omega^2 omega --no-timing");
    EXPECT_EQ(a.out, b.out);
    auto t = run("member omega^2 omega");
    ASSERT_TRUE(t.doc.contains("timing"));
    json body = t.doc;
    body.erase("timing");
    EXPECT_EQ(body, a.doc);
}

TEST(Cli, MemberHoldsAtOne) {
    auto r = run("member omega^2 omega --no-timing");
    EXPECT_EQ(r.code, 0);
    auto* m = result(r.doc, "member");
    ASSERT_NE(m, nullptr);
    EXPECT_EQ((*m)["verdict"], "holds");
    EXPECT_EQ((*m)["m"], 1);
}

TEST(Cli, ParseErrorExitsOne) {
    auto r = run("classify 'omega^^2' --no-timing");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.doc["status"], "error");
    EXPECT_EQ(r.doc["input"]["error_position"], 6);
    EXPECT_EQ(r.doc["input"]["spec"], "omega^^2");
}

TEST(Cli, PrefixInconclusiveExitsTwo) {
    auto r = run("classify 'prefix(" + data("harmonic4.txt") + ")' --window 1024 --no-timing");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.doc["status"], "inconclusive");
}

TEST(Cli, UnsortedPrefixNeedsMonotonize) {
    auto bad = run("classify 'prefix(" + data("unsorted.txt") + ")' --window 1024 --no-timing");
    EXPECT_EQ(bad.code, 1);
    auto ok = run("classify 'prefix(" + data("unsorted.txt") + ")' --window 1024 --monotonize --no-timing");
    EXPECT_NE(ok.code, 1);
    ASSERT_TRUE(ok.doc.contains("notes"));
    EXPECT_NE(ok.doc["notes"].dump().find("monoton"), std::string::npos);
}

TEST(Cli, EnvironmentAndFlagPrecedence) {
    auto e = run("member omega^2 omega --no-timing", "AMSEQ_WINDOW=65536");
    EXPECT_EQ(e.doc["config"]["window"], 65536);
    EXPECT_EQ(e.doc["config"]["sources"]["window"], "env");
    auto f = run("member omega^2 omega --window 4096 --no-timing", "AMSEQ_WINDOW=65536");
    EXPECT_EQ(f.doc["config"]["window"], 4096);
    EXPECT_EQ(f.doc["config"]["sources"]["window"], "flag");
    auto d = run("member omega^2 omega --no-timing");
    EXPECT_EQ(d.doc["config"]["sources"]["window"], "default");
    EXPECT_EQ(d.doc["config"]["window"], 1 << 20);
}

TEST(Cli, ConstructStrictnessWitness) {
    auto r = run("construct remark42 -j 5 --no-timing");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("4/5"), std::string::npos);
}

TEST(Cli, ConstructExample422) {
    auto r = run("construct ex422 -K 4 --no-timing");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"ok\": true"), std::string::npos);
}

TEST(Cli, VerifyLorentzSuite) {
    auto r = run("verify lorentz --no-timing");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, PrettyIsNotJson) {
    auto r = run("member omega^2 omega --pretty --no-timing");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.doc.is_discarded());
    EXPECT_NE(r.out.find("schema: amseq.report/1"), std::string::npos);
}

TEST(Cli, JsonAndPrettyExclusive) {
    auto r = run("member omega^2 omega --json --pretty");
    EXPECT_NE(r.code, 0);
}
