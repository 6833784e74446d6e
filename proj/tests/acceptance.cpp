// Acceptance criteria: one PASS/FAIL line each, including the runtime limit.
// Usage: acceptance [-v]   (-v lists every failing check)

#include "amseq/suites.hpp"

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>

using namespace amseq;

namespace {

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<std::vector<SuiteOutcome>(const SuiteConfig&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
    SuiteConfig cfg;
    const std::vector<Criterion> criteria{
        {1, "exact identities", 10, [](auto& c) { return std::vector{suite_identities(c)}; }},
        {2, "ampliation inequalities and strictness witness", 30,
         [](auto& c) { return std::vector{suite_lemma41(c)}; }},
        {3, "doubling bounds for the mean at infinity", 30,
         [](auto& c) { return std::vector{suite_cor43(c), suite_cor44(c)}; }},
        {4, "infinity-regularity condition agreement", 60, [](auto& c) { return std::vector{suite_thm412(c)}; }},
        {5, "matuszewska index accuracy and analytic bounds", 60,
         [](auto& c) { return std::vector{suite_indices(c)}; }},
        {6, "lorentz tower rule", 5, [](auto& c) { return std::vector{suite_lorentz(c)}; }},
        {7, "construction certificates", 60, [](auto& c) { return std::vector{suite_constructions(c)}; }},
        {8, "trace dimension verdicts", 60, [](auto& c) { return std::vector{suite_trace(c)}; }},
    };

    int failed = 0;
    for (auto& cr : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<SuiteOutcome> outs;
        std::string error;
        try {
            outs = cr.run(cfg);
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::size_t checks = 0, bad = 0;
        for (auto& o : outs) checks += o.checks.size(), bad += o.failures();
        bool in_time = secs < cr.limit_seconds;
        bool pass = error.empty() && checks > 0 && bad == 0 && in_time;
        if (!pass) ++failed;
        std::printf("%s %d %s: %zu checks, %zu failed, %.1fs (limit %.0fs)%s%s\n", pass ? "PASS" : "FAIL", cr.id,
                    cr.name, checks, bad, secs, cr.limit_seconds, in_time ? "" : " over time limit",
                    error.empty() ? "" : (" error: " + error).c_str());
        if (verbose)
            for (auto& o : outs)
                for (auto& c : o.checks)
                    if (!c.ok) std::printf("    %s/%s: %s\n", o.name.c_str(), c.label.c_str(), c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
