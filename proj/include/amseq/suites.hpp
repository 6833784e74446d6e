#pragma once

/**
 * @file suites.hpp
 * @brief Property-verification suites shared by the CLI and the acceptance binary.
 *
 * Each suite returns a list of named checks. Items inside a suite are independent and run on a
 * small worker pool; results are collected in input order so the outcome is deterministic.
 */

#include "parse.hpp"
#include "report.hpp"

#include <chrono>
#include <future>
#include <random>
#include <thread>

namespace amseq {

struct SuiteConfig {
    index_t window = default_window;
    index_t m_max = default_m_max;
    real tol = 1e-12L;  // relative slack on bracketed (non-exact) comparisons
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    index_t horizon = 1000000;
    std::uint64_t seed = 20240601;
};

struct SuiteCheck {
    std::string label;
    bool ok = true;
    std::string detail;
};

struct SuiteOutcome {
    std::string name;
    std::vector<SuiteCheck> checks;
    double seconds = 0;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.ok; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const SuiteCheck& c) { return !c.ok; }));
    }
    void add(std::string label, bool ok, std::string detail = {}) {
        checks.push_back({std::move(label), ok, std::move(detail)});
    }
    void append(std::vector<SuiteCheck> more) {
        for (auto& c : more) checks.push_back(std::move(c));
    }
};

inline json to_json(const SuiteOutcome& s) {
    json j;
    j["suite"] = s.name;
    j["verdict"] = s.passed() ? "holds" : "fails";
    j["checks"] = s.checks.size();
    j["failures"] = json::array();
    for (auto& c : s.checks)
        if (!c.ok) j["failures"].push_back({{"check", c.label}, {"detail", c.detail}});
    j["passed"] = json::array();
    for (auto& c : s.checks)
        if (c.ok) j["passed"].push_back(c.detail.empty() ? c.label : c.label + ": " + c.detail);
    return j;
}

/// Map f over items with at most `jobs` concurrent workers; output order matches input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, unsigned jobs, F f) -> std::vector<decltype(f(items[0]))> {
    using R = decltype(f(items[0]));
    std::vector<R> out(items.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < items.size();) {
            try {
                out[i] = f(items[i]);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

namespace detail {

/// Nonincreasing positive rationals p/q with q <= 64, zero-padded to `len` after `support`.
inline std::vector<mpq_class> random_prefix(std::mt19937_64& rng, std::size_t len, std::size_t support) {
    std::uniform_int_distribution<int> num(1, 1000), den(1, 64);
    std::vector<mpq_class> v;
    for (std::size_t i = 0; i < support; ++i) {
        mpq_class x(num(rng), den(rng));
        x.canonicalize();
        v.push_back(x);
    }
    std::sort(v.begin(), v.end(), [](const mpq_class& a, const mpq_class& b) { return a > b; });
    v.resize(len, mpq_class(0));
    return v;
}

/// a <= c·b at index j, exactly when both values are rational, else in log space with slack tol.
inline bool le_at(const Sequence& a, const Sequence& b, index_t j, const mpq_class& c, real tol, bool exact_ok = true) {
    if (exact_ok) {
        auto x = a.exact(j);
        auto y = b.exact(j);
        if (x && y) return *x <= c * *y;
    }
    real la = a.log_value(j), lb = b.log_value(j);
    if (la == neg_inf) return true;
    if (lb == neg_inf) return false;
    return la <= lb + log_of(c) + tol;
}

inline std::string show_index(index_t j) { return "j=" + std::to_string(j); }

}  // namespace detail

// ---------------------------------------------------------------------------

/// Finitely supported catalog members with exact values.
inline std::vector<std::pair<std::string, Sequence>> finite_catalog() {
    std::vector<std::pair<std::string, Sequence>> out;
    for (index_t j : {2, 3, 5, 10, 50}) {
        out.emplace_back("remark42 j=" + std::to_string(j), finite_sequence(std::vector<mpq_class>(2 * j - 1, mpq_class(1))));
    }
    std::vector<mpq_class> harmonic;
    for (int i = 1; i <= 300; ++i) harmonic.emplace_back(1, i);
    out.emplace_back("harmonic prefix 300", finite_sequence(harmonic));
    std::vector<mpq_class> stair;
    for (int i = 1; i <= 256; ++i) stair.emplace_back(1, 1 << (std::bit_width(static_cast<unsigned>(i)) - 1));
    out.emplace_back("dyadic staircase 256", finite_sequence(stair));
    out.emplace_back("single atom", finite_sequence({mpq_class(1)}));
    return out;
}

/// ξ_a and ξ_{a∞} recurrences and ξ_a + ξ_{a∞} = (Σξ)ω, all exact.
inline SuiteOutcome suite_identities(const SuiteConfig& cfg, int randoms = 50, std::size_t length = 2000) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"identities", {}, 0};
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::pair<std::string, Sequence>> items;
    std::uniform_int_distribution<std::size_t> sup(length / 4, length);
    for (int i = 0; i < randoms; ++i)
        items.emplace_back("random #" + std::to_string(i), finite_sequence(detail::random_prefix(rng, length, sup(rng))));
    for (auto& c : finite_catalog()) items.push_back(c);

    auto results = parallel_map(items, cfg.jobs, [](const std::pair<std::string, Sequence>& it) {
        const auto& [name, s] = it;
        auto a = arithmetic_mean(s);
        auto A = am_infinity(s);
        index_t end = *s.support_end() + 2;
        mpq_class total = *s.node().exact_tail(0);
        std::optional<std::string> bad;
        mpq_class a_prev, A_prev;
        for (index_t n = 1; n <= end && !bad; ++n) {
            mpq_class x = s.exact_or_throw(n), an = a.exact_or_throw(n), An = A.exact_or_throw(n);
            mpq_class nn = to_mpq(n);
            if (n == 1 && an != x) bad = "xi_a recurrence at n=1";
            if (n > 1 && nn * an != x + (nn - 1) * a_prev) bad = "xi_a recurrence at n=" + std::to_string(n);
            if (n > 1 && (nn - 1) * A_prev != x + nn * An) bad = "xi_ainf recurrence at n=" + std::to_string(n);
            if (an + An != total / nn) bad = "mean identity at n=" + std::to_string(n);
            a_prev = an;
            A_prev = An;
        }
        return SuiteCheck{name, !bad, bad ? *bad : "n<=" + std::to_string(end)};
    });
    out.append(std::move(results));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::pair<std::string, Sequence>> lemma41_inputs(const SuiteConfig& cfg) {
    std::vector<std::pair<std::string, Sequence>> items;
    for (auto q : {mpq_class(1, 4), mpq_class(1, 2), mpq_class(3, 4)}) items.emplace_back("geom(" + q.get_str() + ")", geom(q));
    std::mt19937_64 rng(cfg.seed ^ 0x41);
    for (int i = 0; i < 6; ++i) {
        std::size_t len = 50 + 350 * static_cast<std::size_t>(i);
        items.emplace_back("random finite #" + std::to_string(i), finite_sequence(random_prefix(rng, len, len)));
    }
    items.emplace_back("pw ex45iii", piecewise(ex45iii_rule()));
    items.emplace_back("pw ex422", piecewise(ex422_rule()));
    PwRule steps = make_rule(
        "steps", [](int k) { return mpz_class(10 * k * k); }, [](int k) { return mpq_class(1, k * k); }, Summable::yes);
    steps.last_block = 30;
    items.emplace_back("pw finite steps", piecewise(steps));
    return items;
}

}  // namespace detail

/// Ampliation inequalities (i)-(iv) for m = 2..6 at every j <= jmax.
inline SuiteOutcome suite_lemma41(const SuiteConfig& cfg, index_t jmax = 10000) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"lemma41", {}, 0};
    auto items = detail::lemma41_inputs(cfg);
    struct Task {
        std::string name;
        Sequence s;
        index_t m;
    };
    std::vector<Task> tasks;
    for (auto& [n, s] : items)
        for (index_t m = 2; m <= 6; ++m) tasks.push_back({n, s, m});
    real tol = cfg.tol;
    auto results = parallel_map(tasks, cfg.jobs, [&](const Task& t) {
        const Sequence& s = t.s;
        index_t m = t.m;
        auto A = am_infinity(s);
        auto DmA = ampliation(A, m);
        auto Dm = ampliation(s, m);
        auto DmS_A = am_infinity(Dm);
        auto Dm1 = ampliation(s, m - 1);
        auto Dm1_A = am_infinity(Dm1);
        auto Dil = dilution(s, m);
        // Geometric inputs: exact rationals grow like q^{6j}; switch to log space past j = 2000.
        bool exact_all = s.support_end().has_value() || dynamic_cast<const PiecewiseNode*>(&s.node());
        mpq_class one(1), half_inv(1, static_cast<unsigned long>(2 * (m - 1))), inv(1, static_cast<unsigned long>(m - 1));
        std::optional<std::string> bad;
        for (index_t j = 1; j <= jmax && !bad; ++j) {
            bool ex = exact_all || j <= 2000;
            if (!detail::le_at(DmA, DmS_A, j, one, tol, ex)) bad = "(i) at " + detail::show_index(j);
            else if (j >= (m - 1) * (m - 2) && !detail::le_at(Dm1_A, DmA, j, one, tol, ex))
                bad = "(ii) at " + detail::show_index(j);
            else if (j >= 2 * m * (m - 1) && !detail::le_at(Dm1, DmA, j, mpq_class(2 * (m - 1)), tol, ex))
                bad = "(iii) at " + detail::show_index(j);
            else if (!detail::le_at(Dil, A, j, inv, tol, ex))
                bad = "(iv) at " + detail::show_index(j);
        }
        (void)half_inv;
        return SuiteCheck{t.name + " m=" + std::to_string(m), !bad, bad ? *bad : "j<=" + std::to_string(jmax)};
    });
    out.append(std::move(results));
    // Sharpness witness of the constant in (iii)-(iv).
    for (index_t j = 2; j <= 50; ++j) {
        try {
            auto [xi, cert] = remark_42_witness(j);
            out.add("remark42 j=" + std::to_string(j), cert.ok(), cert.facts.empty() ? "" : cert.facts[0].second);
        } catch (const std::exception& e) {
            out.add("remark42 j=" + std::to_string(j), false, e.what());
        }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

/// Summable catalog used by the tail-mean bound suites.
inline std::vector<std::pair<std::string, SeqExpr>> summable_catalog() {
    std::vector<std::pair<std::string, SeqExpr>> out;
    for (const char* s : {"omega^1.25", "omega^1.5", "omega^2", "omega^3", "geom(1/4)", "geom(1/2)", "geom(3/4)",
                          "omega*log^-1.5", "omega*log^-2", "omega*log^-3", "pw(ex45iii)", "pw(ex422)"})
        out.emplace_back(s, parse(s));
    return out;
}

/// ξ_j <= 2 (D_2 ξ_{a∞})_j for 4 <= j <= jmax on the summable catalog.
inline SuiteOutcome suite_cor43(const SuiteConfig& cfg, index_t jmax = 10000) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"cor43", {}, 0};
    auto items = summable_catalog();
    std::mt19937_64 rng(cfg.seed ^ 0x43);
    for (int i = 0; i < 4; ++i)
        items.emplace_back("random finite #" + std::to_string(i),
                           SeqExpr::prefix("random" + std::to_string(i), detail::random_prefix(rng, 500, 500)));
    real tol = cfg.tol;
    auto results = parallel_map(items, cfg.jobs, [&](const std::pair<std::string, SeqExpr>& it) {
        auto s = compile(it.second);
        auto D2A = ampliation(am_infinity(s), 2);
        bool exact_all = s.support_end().has_value() || it.second.kind == SeqExpr::Kind::piecewise;
        std::optional<std::string> bad;
        for (index_t j = 4; j <= jmax && !bad; ++j)
            if (!detail::le_at(s, D2A, j, mpq_class(2), tol, exact_all || j <= 2000)) bad = detail::show_index(j);
        return SuiteCheck{it.first, !bad, bad ? "violated at " + *bad : "4<=j<=" + std::to_string(jmax)};
    });
    out.append(std::move(results));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// With M = sup ξ/ξ_{a∞} certified on the window: (ξ_{a∞})_n / (ξ_{a∞})_{2n} <= 2^{M+1} at probes.
inline SuiteOutcome suite_cor44(const SuiteConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"cor44", {}, 0};
    auto items = summable_catalog();
    index_t W = cfg.window;
    auto results = parallel_map(items, cfg.jobs, [&](const std::pair<std::string, SeqExpr>& it) {
        auto s = compile(it.second);
        // Certified means the sup statistic has stabilized on the window.
        auto A = am_infinity(s);
        auto sc = detail::scan(
            [&](index_t n) { return detail::log_ratio(s.log_value(n), A.log_value(n)); }, W, true);
        auto rep = detail::sup_report("sup xi/xi_ainf", sc, W);
        if (rep.verdict != Verdict::holds || !rep.constant)
            return SuiteCheck{it.first, true, "no certified M (" + to_string(rep.verdict) + "); skipped"};
        real M = *rep.constant;
        real bound = (M + 1) * std::log(2.0L);
        auto grid = detail::stratified_grid(W / 2);
        for (index_t n : grid) {
            real r = A.log_value(n) - A.log_value(2 * n);
            if (r > bound + cfg.tol)
                return SuiteCheck{it.first, false, "n=" + std::to_string(n) + " ratio exceeds 2^(M+1), M=" + format_real(static_cast<double>(M))};
        }
        return SuiteCheck{it.first, true, "M=" + format_real(static_cast<double>(M)) + ", " + std::to_string(grid.size()) + " probes"};
    });
    out.append(std::move(results));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

/// Ground truth for the ∞-regularity conditions: expression and expected verdict.
inline std::vector<std::pair<std::string, bool>> thm412_ground_truth() {
    return {{"omega^1.25", true},     {"omega^1.5", true},    {"omega^2", true},      {"omega^3", true},
            {"geom(1/4)", true},      {"geom(1/2)", true},    {"geom(3/4)", true},    {"omega*log^-1.5", false},
            {"omega*log^-2", false},  {"omega*log^-3", false}, {"pw(ex45iii)", false}};
}

inline const std::vector<std::string>& thm412_conditions() {
    static const std::vector<std::string> c{"ii", "iii", "v", "v'", "v''", "v'''", "vi"};
    return c;
}

/// Every implemented condition returns the expected verdict at the window.
inline SuiteOutcome suite_thm412(const SuiteConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"thm412", {}, 0};
    auto truth = thm412_ground_truth();
    index_t W = cfg.window;
    auto results = parallel_map(truth, cfg.jobs, [W](const std::pair<std::string, bool>& it) {
        auto cc = cross_check_412(compile(parse(it.first)), W);
        Verdict want = it.second ? Verdict::holds : Verdict::fails;
        std::string detail;
        bool ok = true;
        for (auto& name : thm412_conditions()) {
            auto v = cc.at(name).verdict;
            detail += name + "=" + to_string(v) + " ";
            ok &= v == want;
        }
        detail += "(iv)=" + to_string(cc.at("iv").verdict);
        ok &= cc.agreement;
        return SuiteCheck{it.first, ok, detail};
    });
    out.append(std::move(results));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

/// α, β of ω^p within 0.05 of -p, and the analytic bounds on regular / ∞-regular members.
inline SuiteOutcome suite_indices(const SuiteConfig& cfg, index_t K = default_k_cap) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"indices", {}, 0};
    index_t W = cfg.window;
    struct Item {
        std::string spec;
        std::optional<real> p;   // exact index when known
        bool infty_regular;
        bool regular;
    };
    std::vector<Item> items{{"omega^0.25", 0.25L, false, true}, {"omega^0.5", 0.5L, false, true},
                            {"omega^0.75", 0.75L, false, true}, {"omega^1.25", 1.25L, true, false},
                            {"omega^1.5", 1.5L, true, false},   {"omega^2", 2.0L, true, false},
                            {"omega^3", 3.0L, true, false},     {"geom(1/2)", std::nullopt, true, false},
                            {"geom(3/4)", std::nullopt, true, false}};
    auto results = parallel_map(items, cfg.jobs, [&](const Item& it) {
        auto s = compile(parse(it.spec));
        auto e = matuszewska_indices(s, W, K);
        auto b = analytic_bounds(s, W);
        std::vector<SuiteCheck> cs;
        if (it.p) {
            bool ok = std::abs(e.alpha + *it.p) <= 0.05L && std::abs(e.beta + *it.p) <= 0.05L;
            cs.push_back({it.spec + " alpha,beta", ok,
                          "alpha=" + format_real(static_cast<double>(e.alpha)) + " beta=" + format_real(static_cast<double>(e.beta))});
        }
        if (it.infty_regular) {
            bool ok = b.alpha_upper && (e.alpha_to_minus_infinity || e.alpha <= *b.alpha_upper + 0.05L);
            cs.push_back({it.spec + " alpha <= -1 - inf xi/xi_ainf", ok,
                          "alpha=" + (e.alpha_to_minus_infinity ? std::string("-inf") : format_real(static_cast<double>(e.alpha))) +
                              " bound=" + (b.alpha_upper ? format_real(static_cast<double>(*b.alpha_upper)) : "none")});
        }
        if (it.regular) {
            bool ok = b.beta_lower && e.beta >= *b.beta_lower - 0.05L;
            cs.push_back({it.spec + " beta >= -1 + inf xi/xi_a", ok,
                          "beta=" + format_real(static_cast<double>(e.beta)) +
                              " bound=" + (b.beta_lower ? format_real(static_cast<double>(*b.beta_lower)) : "none")});
        }
        return cs;
    });
    for (auto& r : results) out.append(std::move(r));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

/// Growth class of ξ_{a∞} from that of ξ: (1/n) Σ_{j>n} c j^{-p} ln^r j Q^j.
inline std::optional<AsymKey> am_infinity_key(const AsymKey& k) {
    if (k.log_q < 0) return AsymKey{k.log_q, k.p + 1, k.r};
    if (k.p > 1) return AsymKey{0, k.p, k.r};
    if (k.p == 1 && k.r < -1) return AsymKey{0, 1, k.r + 1};
    return std::nullopt;  // not summable
}

}  // namespace detail

/// Catalog for the Lorentz tower check.
inline std::vector<std::string> lorentz_catalog() {
    return {"omega^1.1",      "omega^1.5",      "omega^2",         "omega^3",         "geom(1/4)",
            "geom(1/2)",      "geom(9/10)",     "omega*log^-1.5",  "omega*log^-2",    "omega*log^-2.5",
            "omega*log^-3",   "omega*log^-3.5", "omega*log^-4",    "omega*log^-4.5",  "omega*log^-5",
            "omega*log^-5.5", "omega*log^-6",   "omega*log^-7",    "omega^2*log^3",   "omega^1.5*log^-1"};
}

/// ξ_{a∞} ∈ L(σ(log^m)) ⟺ ξ ∈ L(σ(log^{m+1})), m <= 4: the shift rule against growth classes.
inline SuiteOutcome suite_lorentz(const SuiteConfig& cfg, int depth = 4) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"lorentz", {}, 0};
    (void)cfg;
    for (auto& spec : lorentz_catalog()) {
        auto e = parse(spec);
        auto s = compile(e);
        auto key = key_of(s);
        auto ak = key ? detail::am_infinity_key(*key) : std::nullopt;
        if (!ak) {
            out.add(spec, false, "no growth class for the mean at infinity");
            continue;
        }
        auto A = am_infinity(s);
        std::string detail;
        bool ok = true;
        for (int m = 0; m <= depth; ++m) {
            Summable rule = A.lorentz(m);
            Summable direct = lorentz_member(e, m + 1);
            Summable via_class = ak->lorentz(m);
            ok &= rule == direct && direct == via_class && rule != Summable::unknown;
            detail += "m=" + std::to_string(m) + ":" + to_string(rule) + " ";
        }
        out.add(spec, ok, detail);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

/// Construction certificates at the acceptance sizes.
inline SuiteOutcome suite_constructions(const SuiteConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"constructions", {}, 0};
    auto guard = [&](const std::string& label, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            out.add(label, false, e.what());
        }
    };
    guard("lemma47", [&] {
        auto r = lemma_47_block_eta(lemma47_demo_xi(), lemma47_demo_alpha(), std::max<index_t>(cfg.horizon, 1000000), 10000);
        bool ok = r.certificate.ok() && r.blocks.size() >= 6;
        out.add("lemma47", ok, std::to_string(r.blocks.size()) + " blocks, last ends at " + std::to_string(r.blocks.back().m));
    });
    guard("thm78xi", [&] {
        auto base = theorem_78_xi(omega_pow(0.5), 20);
        out.add("thm78xi L=20", base.certificate.ok(), "p_20=" + big_str(base.p_list.back(), 8));
        guard("thm78family", [&] {
            auto fam = theorem_78_family(base, 3, 8);
            out.add("thm78family N=3 K=8", fam.certificate.ok(), "m_9=" + big_str(fam.m_next.back(), 8));
        });
    });
    guard("ex422", [&] {
        auto [e, c] = example_422(6);
        out.add("ex422 K=6", c.ok(), "m_6=" + c.facts[0].second);
    });
    guard("ex45iii", [&] {
        auto [e, c] = example_45_iii(12);
        out.add("ex45iii K=12", c.ok(), c.facts[0].second);
    });
    guard("remark42", [&] {
        auto [x, c] = remark_42_witness(5);
        out.add("remark42 j=5", c.ok(), c.facts[0].second);
    });
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Trace dimensions of the reference principal ideals.
inline std::vector<std::pair<std::string, TraceDim>> trace_ground_truth() {
    return {{"omega^0.5", TraceDim::zero},
            {"omega^2", TraceDim::one},
            {"omega", TraceDim::uncountable},
            {"omega*log^-2", TraceDim::uncountable},
            {"geom(1/2)", TraceDim::one}};
}

inline SuiteOutcome suite_trace(const SuiteConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome out{"trace", {}, 0};
    auto truth = trace_ground_truth();
    auto results = parallel_map(truth, cfg.jobs, [&](const std::pair<std::string, TraceDim>& it) {
        auto e = parse(it.first);
        auto t = trace_dimension(PrincipalIdeal(e), cfg.window, cfg.m_max);
        bool no_inconclusive = true;
        std::string chain;
        for (auto& [step, v] : t.chain) {
            chain += step + "=" + v + " ";
            no_inconclusive &= v != "inconclusive" && v != "unknown";
        }
        return SuiteCheck{it.first, t.value == it.second && no_inconclusive && !t.chain.empty(),
                          to_string(t.value) + " [" + chain + "]"};
    });
    out.append(std::move(results));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"identities", "lemma41",      "cor43", "cor44", "thm412",
                                            "indices",    "lorentz", "constructions", "trace", "all"};
    return n;
}

inline std::vector<SuiteOutcome> run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "identities") return {suite_identities(cfg)};
    if (name == "lemma41") return {suite_lemma41(cfg)};
    if (name == "cor43") return {suite_cor43(cfg)};
    if (name == "cor44") return {suite_cor44(cfg)};
    if (name == "thm412") return {suite_thm412(cfg)};
    if (name == "indices") return {suite_indices(cfg)};
    if (name == "lorentz") return {suite_lorentz(cfg)};
    if (name == "constructions") return {suite_constructions(cfg)};
    if (name == "trace") return {suite_trace(cfg)};
    if (name == "all") {
        std::vector<SuiteOutcome> all;
        for (auto& n : suite_names())
            if (n != "all") all.push_back(run_suite(n, cfg).front());
        return all;
    }
    std::string known;
    for (auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw domain_error("unknown suite '" + name + "' (known: " + known + ")");
}

}  // namespace amseq
