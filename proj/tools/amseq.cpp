// amseq: classify sequences, run verification suites, test membership, run constructions.
//
// Exit codes: 0 every verdict definite, 2 some verdict inconclusive, 1 error or failed suite.

#include <amseq/suites.hpp>

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace amseq;

namespace {

struct Options {
    index_t window = default_window;
    index_t m_max = default_m_max;
    double tol = 1e-12;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    index_t horizon = 1000000;
    bool pretty = false;
    bool json_out = false;
    bool monotonize = false;
    bool no_timing = false;
};

// Flags > AMSEQ_* environment > defaults (CLI11 applies the order); records where each value came from.
struct Sources {
    std::vector<std::string> names;
    json describe(const Options& o) const {
        json c;
        c["window"] = o.window;
        c["mmax"] = o.m_max;
        c["tol"] = o.tol;
        c["jobs"] = o.jobs;
        c["horizon"] = o.horizon;
        c["monotonize"] = o.monotonize;
        json src = json::object();
        for (auto& name : names) {
            std::string env = "AMSEQ_" + name;
            for (auto& ch : env) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            src[name] = flagged(name) ? "flag" : std::getenv(env.c_str()) ? "env" : "default";
        }
        c["sources"] = src;
        // Jobs never changes a result; keep it out of the deterministic body.
        c.erase("jobs");
        return c;
    }
    std::vector<std::string> argv_flags;
    bool flagged(const std::string& name) const {
        std::string f = "--" + name;
        return std::any_of(argv_flags.begin(), argv_flags.end(),
                           [&](const std::string& a) { return a == f || a.rfind(f + "=", 0) == 0; });
    }
};

void emit(const Report& r, const Options& o, double secs) {
    json doc = o.no_timing ? r.body() : r.finish(secs);
    if (o.pretty)
        std::cout << render_text(doc);
    else
        std::cout << doc.dump(2) << "\n";
}

SeqExpr parse_spec(const std::string& spec, const Options& o, Report& r, const std::string& role) {
    r.input()[role] = spec;
    PrefixOptions po;
    po.monotonize = o.monotonize;
    Parser p(spec, po);
    SeqExpr e = p.parse();
    if (p.monotonized()) r.note(role + ": prefix file was not nonincreasing; monotonized before use");
    return e;
}

int cmd_classify(const std::string& spec, const Options& o, Report& r) {
    SeqExpr e = parse_spec(spec, o, r, "spec");
    r.input()["canonical"] = print(e);
    auto s = compile(e);
    Summable sm = symbolic_summability(e);
    r.add("symbolic_summability", {{"verdict", to_string(sm) == std::string("unknown") ? "inconclusive" : to_string(sm)}});
    auto guarded = [&](const std::string& op, auto&& f) {
        try {
            r.add(op, f());
        } catch (const summability_error& ex) {
            r.skip(op, ex.what());
        } catch (const domain_error& ex) {
            r.skip(op, ex.what());
        }
    };
    guarded("check_delta_half", [&] { return to_json(check_delta_half(s, o.window)); });
    guarded("check_regular", [&] { return to_json(check_regular(s, o.window)); });
    if (sm == Summable::yes)
        guarded("check_infty_regular", [&] { return to_json(check_infty_regular(s, o.window)); });
    else
        r.skip("check_infty_regular", std::string("summability is ") + to_string(sm));
    guarded("matuszewska_indices", [&] { return to_json(matuszewska_indices(s, o.window)); });
    guarded("analytic_bounds", [&] { return to_json(analytic_bounds(s, o.window)); });
    if (sm == Summable::yes)
        guarded("cross_check_412", [&] { return to_json(cross_check_412(s, o.window)); });
    else
        r.skip("cross_check_412", std::string("summability is ") + to_string(sm));
    guarded("trace_dimension", [&] { return to_json(trace_dimension(PrincipalIdeal(e), o.window, o.m_max)); });
    return r.exit_code();
}

int cmd_verify(const std::string& suite, const Options& o, Report& r) {
    r.input()["suite"] = suite;
    SuiteConfig cfg;
    cfg.window = o.window;
    cfg.m_max = o.m_max;
    cfg.tol = o.tol;
    cfg.jobs = o.jobs;
    cfg.horizon = o.horizon;
    for (auto& out : run_suite(suite, cfg)) r.add("suite", to_json(out), !out.passed());
    return r.exit_code();
}

int cmd_member(const std::string& eta_spec, const std::string& xi_spec, const Options& o, Report& r) {
    SeqExpr eta = parse_spec(eta_spec, o, r, "eta");
    SeqExpr xi = parse_spec(xi_spec, o, r, "xi");
    auto rep = member(compile(eta), PrincipalIdeal(xi), o.m_max, o.window);
    r.add("member", to_json(rep));
    return r.exit_code();
}

// Prefix dump: index and value per line; exact rationals where available.
void dump_sequence(const std::string& path, index_t count, const std::function<std::string(index_t)>& value) {
    std::ofstream f(path);
    if (!f) throw domain_error("cannot write dump file '" + path + "'");
    for (index_t n = 1; n <= count; ++n) f << value(n) << "\n";
}

std::string seq_value(const Sequence& s, index_t n) {
    if (auto v = s.exact(n)) return v->get_str();
    return format_real(static_cast<double>(s.value(n)));
}

struct ConstructParams {
    std::string name;
    int K = -1;
    int L = 20;
    int N = 3;
    index_t j = 5;
    std::string mu = "omega^0.5";
    std::string xi, alpha;
    bool allow_partial = false;
    std::string dump;
    index_t dump_count = 1000;
};

int cmd_construct(const ConstructParams& p, const Options& o, Report& r) {
    r.input()["construction"] = p.name;
    auto dump = [&](const std::function<std::string(index_t)>& value) {
        if (p.dump.empty()) return;
        dump_sequence(p.dump, p.dump_count, value);
        r.input()["dump"] = {{"path", p.dump}, {"count", p.dump_count}};
    };
    auto certify = [&](const ConstructionCertificate& c) { r.add("certificate", to_json(c), !c.ok() && !c.partial); };
    if (p.name == "ex45iii") {
        int K = p.K < 0 ? 12 : p.K;
        r.input()["K"] = K;
        auto [e, c] = example_45_iii(K, p.allow_partial);
        r.input()["produced"] = print(e);
        certify(c);
        auto s = compile(e);
        dump([&](index_t n) { return seq_value(s, n); });
    } else if (p.name == "ex422") {
        int K = p.K < 0 ? 6 : p.K;
        r.input()["K"] = K;
        auto [e, c] = example_422(K);
        r.input()["produced"] = print(e);
        certify(c);
        auto s = compile(e);
        dump([&](index_t n) { return seq_value(s, n); });
    } else if (p.name == "lemma47") {
        Sequence xi = p.xi.empty() ? lemma47_demo_xi() : compile(parse_spec(p.xi, o, r, "xi"));
        Sequence alpha = p.alpha.empty() ? lemma47_demo_alpha() : compile(parse_spec(p.alpha, o, r, "alpha"));
        if (p.xi.empty()) r.input()["xi"] = "demo";
        if (p.alpha.empty()) r.input()["alpha"] = "2*geom(1/2)";
        r.input()["horizon"] = o.horizon;
        auto res = lemma_47_block_eta(xi, alpha, o.horizon, std::min<index_t>(10000, o.horizon), p.allow_partial);
        json blocks = json::array();
        for (auto& b : res.blocks) blocks.push_back({{"n", b.n}, {"m", b.m}, {"sum", jreal(b.block_sum)}});
        r.add("blocks", {{"blocks", blocks}});
        certify(res.certificate);
        dump([&](index_t n) { return seq_value(res.eta, n); });
    } else if (p.name == "thm78xi" || p.name == "thm78family") {
        SeqExpr mu = parse_spec(p.mu, o, r, "mu");
        r.input()["L"] = p.L;
        auto base = theorem_78_xi(compile(mu), p.L, p.allow_partial);
        json plist = json::array();
        for (auto& x : base.p_list) plist.push_back(big_str(x, 30));
        r.add("levels", {{"p_list", plist}});
        certify(base.certificate);
        if (p.name == "thm78family") {
            int K = p.K < 0 ? 8 : p.K;
            r.input()["N"] = p.N;
            r.input()["K"] = K;
            auto fam = theorem_78_family(base, p.N, K, 200, p.allow_partial);
            json lad = json::array();
            for (std::size_t k = 0; k < fam.ladders.size(); ++k) {
                json row = json::array();
                for (std::size_t jj = 0; jj < fam.ladders[k].size(); ++jj)
                    row.push_back({{"j", jj + 1}, {"m", big_str(fam.ladders[k][jj].first, 30)},
                                   {"n", big_str(fam.ladders[k][jj].second, 30)}});
                json entry{{"k", k + 1}, {"rungs", row}};
                if (k < fam.m_next.size()) entry["m_next"] = big_str(fam.m_next[k], 30);
                lad.push_back(entry);
            }
            r.add("ladders", {{"ladders", lad}});
            certify(fam.certificate);
            if (p.N > 1)
                dump([&](index_t n) {
                    std::string line;
                    for (int jj = 1; jj <= p.N; ++jj) line += (jj > 1 ? " " : "") + big_str(fam.eta(jj, bigfloat(n)), 20);
                    return line;
                });
        } else {
            auto& E = *base.engine;
            dump([&](index_t n) { return big_str(E.xi(bigfloat(n)), 20); });
        }
    } else if (p.name == "remark42") {
        r.input()["j"] = p.j;
        auto [xi, c] = remark_42_witness(p.j);
        certify(c);
        dump([&](index_t n) { return seq_value(xi, n); });
    } else {
        throw domain_error("unknown construction '" + p.name +
                           "' (known: ex45iii, ex422, lemma47, thm78xi, thm78family, remark42)");
    }
    return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequence-level tools for arithmetic-mean ideals"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    Sources src;
    for (int i = 1; i < argc; ++i) src.argv_flags.emplace_back(argv[i]);

    src.names.emplace_back("window");
    app.add_option("--window", o.window, "window size W")->envname("AMSEQ_WINDOW");
    src.names.emplace_back("mmax");
    app.add_option("--mmax", o.m_max, "largest ampliation tried")->envname("AMSEQ_MMAX");
    src.names.emplace_back("tol");
    app.add_option("--tol", o.tol, "relative slack for bracketed comparisons")->envname("AMSEQ_TOL");
    src.names.emplace_back("jobs");
    app.add_option("--jobs", o.jobs, "worker threads")->envname("AMSEQ_JOBS");
    src.names.emplace_back("horizon");
    app.add_option("--horizon", o.horizon, "index budget for constructions")->envname("AMSEQ_HORIZON");
    auto* fj = app.add_flag("--json", o.json_out, "JSON output (default)");
    auto* fp = app.add_flag("--pretty", o.pretty, "indented text output");
    fj->excludes(fp);
    app.add_flag("--monotonize", o.monotonize, "rearrange non-monotone prefix files instead of rejecting them");
    app.add_flag("--no-timing", o.no_timing, "omit the timing object");

    std::string spec, eta, xi, suite;
    auto* c_classify = app.add_subcommand("classify", "classify one sequence");
    c_classify->add_option("spec", spec, "sequence expression")->required();
    auto* c_verify = app.add_subcommand("verify", "run a property suite");
    c_verify->add_option("suite", suite, "suite name")->required();
    auto* c_member = app.add_subcommand("member", "test eta in the principal ideal of xi");
    c_member->add_option("eta", eta)->required();
    c_member->add_option("xi", xi)->required();
    ConstructParams cp;
    auto* c_construct = app.add_subcommand("construct", "run a construction and print its certificate");
    c_construct->add_option("name", cp.name)->required();
    c_construct->add_option("-K", cp.K, "blocks / rounds");
    c_construct->add_option("-L", cp.L, "levels");
    c_construct->add_option("-N", cp.N, "family size");
    c_construct->add_option("-j", cp.j, "witness parameter");
    c_construct->add_option("--mu", cp.mu, "regular non-summable input");
    c_construct->add_option("--xi", cp.xi, "non-summable input");
    c_construct->add_option("--alpha", cp.alpha, "tail lower bound");
    c_construct->add_flag("--allow-partial", cp.allow_partial, "return a construction even when a check fails");
    c_construct->add_option("--dump", cp.dump, "write the first values of the produced sequence to a file");
    c_construct->add_option("--dump-count", cp.dump_count, "number of values to dump");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (o.window < 16) {
        std::cerr << "--window must be at least 16\n";
        return 1;
    }

    std::string command = app.get_subcommands().front()->get_name();
    Report r(command);
    r.config() = src.describe(o);
    auto t0 = std::chrono::steady_clock::now();
    int code = 1;
    try {
        if (command == "classify") code = cmd_classify(spec, o, r);
        else if (command == "verify") code = cmd_verify(suite, o, r);
        else if (command == "member") code = cmd_member(eta, xi, o, r);
        else code = cmd_construct(cp, o, r);
    } catch (const construction_error& e) {
        r.add("certificate", to_json(e.certificate), true);
        r.error(e.what());
        code = 1;
    } catch (const parse_error& e) {
        r.error(e.what());
        r.input()["error_position"] = e.position;
        code = 1;
    } catch (const std::exception& e) {
        r.error(e.what());
        code = 1;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(r, o, secs);
    return code == r.exit_code() ? code : r.exit_code();
}
