#pragma once

/**
 * @file constructions.hpp
 * @brief Constructive sequences with certificates: the block examples, the minorant of a
 * summability-failing sequence, the irregular minorant of a regular power and its family of
 * comparison sequences, and the small witnesses.
 */

#include "ideals.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace amseq {

struct CertificateCheck {
    std::string name;
    bool ok = true;
    std::string detail;
    std::optional<std::string> witness;
};

struct ConstructionCertificate {
    std::string name;
    std::string horizon;
    std::vector<CertificateCheck> checks;
    std::vector<std::pair<std::string, std::string>> facts;
    bool partial = false;  // returned despite failed checks

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const CertificateCheck& c) { return c.ok; });
    }
    void check(std::string n, bool ok, std::string detail = {}, std::optional<std::string> witness = {}) {
        checks.push_back({std::move(n), ok, std::move(detail), std::move(witness)});
    }
    void fact(std::string k, std::string v) { facts.emplace_back(std::move(k), std::move(v)); }
    const CertificateCheck* find(const std::string& n) const {
        for (auto& c : checks)
            if (c.name == n) return &c;
        return nullptr;
    }
};

struct construction_error : domain_error {
    ConstructionCertificate certificate;
    construction_error(const std::string& what, ConstructionCertificate c)
        : domain_error(what), certificate(std::move(c)) {}
};

namespace detail {

inline void finish(ConstructionCertificate& c, bool allow_partial) {
    if (c.ok()) return;
    if (allow_partial) {
        c.partial = true;
        return;
    }
    std::string msg = c.name + ": certificate check failed";
    for (auto& ch : c.checks)
        if (!ch.ok) {
            msg += ": " + ch.name;
            if (ch.witness) msg += " (witness " + *ch.witness + ")";
            if (!ch.detail.empty()) msg += " - " + ch.detail;
            break;
        }
    throw construction_error(msg, c);
}

inline std::string fmt(real x) { return format_real(static_cast<double>(x)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Block example with unbounded drops.

/// Certify a block rule: n_1 = 1, n_k >= k n_{k-1}, ε strictly decreasing, symbolic summability.
inline std::pair<SeqExpr, ConstructionCertificate> example_45_iii(const PwRule& rule, int K,
                                                                   bool allow_partial = false) {
    if (K < 2) throw domain_error("example_45_iii: K must be >= 2");
    ConstructionCertificate c;
    c.name = "ex45iii";
    c.horizon = "K=" + std::to_string(K);
    mpz_class prev = rule.breakpoint(1);
    c.check("n_1 = 1", prev == 1, "n_1=" + prev.get_str());
    std::optional<std::string> bad_growth, bad_eps;
    mpq_class eps_prev = rule.value(1);
    mpq_class mass = eps_prev * prev;
    std::vector<mpq_class> en{mass};
    for (int k = 2; k <= K; ++k) {
        mpz_class n = rule.breakpoint(k);
        mpq_class e = rule.value(k);
        if (!bad_growth && n < k * prev) bad_growth = std::to_string(k);
        if (!bad_eps && !(e < eps_prev)) bad_eps = std::to_string(k);
        en.push_back(e * n);
        mass += e * n;
        prev = n;
        eps_prev = e;
    }
    c.check("n_k >= k n_{k-1}", !bad_growth, bad_growth ? "violated at k=" + *bad_growth : "", bad_growth);
    c.check("eps strictly decreasing", !bad_eps, bad_eps ? "violated at k=" + *bad_eps : "", bad_eps);
    c.check("summable (symbolic)", rule.summable == Summable::yes, std::string("rule reports ") + to_string(rule.summable));
    c.fact("sum_{k<=K} eps_k n_k", detail::fmt(to_real(mass)));
    // Side condition eps_k n_k = O(sum_{j>k} eps_j n_j), evaluated on the finite range.
    real worst = 0;
    for (int k = 0; k + 1 < K; ++k) {
        mpq_class rest(0);
        for (int j = k + 1; j < K; ++j) rest += en[j];
        worst = std::max(worst, to_real(mpq_class(en[k] / rest)));
    }
    c.fact("sup_k eps_k n_k / sum_{k<j<=K} eps_j n_j", detail::fmt(worst));
    detail::finish(c, allow_partial);
    register_pw_rule(rule);
    return {SeqExpr::pw(rule.name), c};
}

inline std::pair<SeqExpr, ConstructionCertificate> example_45_iii(int K = 12, bool allow_partial = false) {
    return example_45_iii(ex45iii_rule(), K, allow_partial);
}

/// Rule from plain breakpoint/value functions; summability must be supplied.
inline PwRule make_rule(std::string name, std::function<mpz_class(int)> n_rule, std::function<mpq_class(int)> eps_rule,
                        Summable summable) {
    PwRule r;
    r.name = std::move(name);
    r.breakpoint = std::move(n_rule);
    r.value = std::move(eps_rule);
    r.summable = summable;
    r.lorentz = [summable](int m) { return m == 0 ? summable : Summable::unknown; };
    return r;
}

// ---------------------------------------------------------------------------
// Sequence below ω² touching it at every breakpoint.

inline std::pair<SeqExpr, ConstructionCertificate> example_422(int K = 6) {
    if (K < 2) throw domain_error("example_422: K must be >= 2");
    ConstructionCertificate c;
    c.name = "ex422";
    c.horizon = "K=" + std::to_string(K);
    auto rule = ex422_rule();
    auto eta = piecewise(rule);
    // Block k: η = 1/m_k² on (m_{k-1}, m_k]; the largest η/ω² sits at j = m_k.
    bool below = true, touch = true;
    std::optional<std::string> w_below, w_touch;
    for (int k = 1; k <= K; ++k) {
        mpz_class m = rule.breakpoint(k);
        mpq_class at_m = rule.value(k) * m * m;
        if (at_m > 1 && below) below = false, w_below = "m_" + std::to_string(k);
        if (at_m != 1 && touch) touch = false, w_touch = "m_" + std::to_string(k);
    }
    c.check("eta <= omega^2 on every block", below, "", w_below);
    c.check("eta_{m_k} / omega^2_{m_k} = 1", touch, "", w_touch);
    // Pointwise comparison at stratified probes up to m_K (where it fits an index).
    mpz_class mK = rule.breakpoint(K);
    index_t top = mK.fits_ulong_p() ? mK.get_ui() : index_t{1} << 62;
    std::vector<index_t> probes;
    for (int i = 0; i < 1000; ++i) {
        real t = static_cast<real>(i) / 999;
        probes.push_back(static_cast<index_t>(std::llround(std::pow(static_cast<real>(top), t))));
    }
    std::optional<std::string> w_probe;
    for (index_t j : probes) {
        auto v = eta.exact(j);
        mpq_class ej = v ? *v : mpq_class(0);
        if (!v) {
            // Beyond the exact range: compare in log space.
            if (eta.log_value(j) > -2 * std::log(static_cast<real>(j)) + 1e-15L) w_probe = std::to_string(j);
        } else if (ej * to_mpq(j) * to_mpq(j) > 1) {
            w_probe = std::to_string(j);
        }
        if (w_probe) break;
    }
    c.check("eta <= omega^2 at 1000 probes up to m_K", !w_probe, "", w_probe);
    c.fact("m_K", mK.get_str());
    c.fact("eta_{m_3}", rule.value(3).get_str());
    detail::finish(c, false);
    return {SeqExpr::pw("ex422"), c};
}

// ---------------------------------------------------------------------------
// Summable minorant with a prescribed tail lower bound.

struct Lemma47Block {
    index_t n = 0, m = 0;
    real block_sum = 0;
};

struct Lemma47Result {
    Sequence eta;
    std::vector<Lemma47Block> blocks;
    ConstructionCertificate certificate;
};

/// Run the block iteration for non-summable ξ = o(ω) and α nonincreasing with α_1 >= 1.
inline Lemma47Result lemma_47_block_eta(const Sequence& xi, const Sequence& alpha, index_t horizon = 1000000,
                                        index_t check_upto = 10000, bool allow_partial = false) {
    if (xi.summable() == Summable::yes)
        throw domain_error("lemma_47_block_eta: the sequence is summable; the construction needs a non-summable one");
    if (alpha.value(1) < 1) throw domain_error("lemma_47_block_eta: alpha_1 must be >= 1");
    std::vector<real> x(horizon + 1);
    for (index_t n = 1; n <= horizon; ++n) x[n] = xi.value(n);
    // n ξ_n <= 2^{-k} and α_n <= 2^{-k}, exactly when both sides have rational values.
    auto below = [](const Sequence& s, index_t j, real scale, int k) {
        if (auto v = s.exact(j)) {
            mpq_class lhs = *v * to_mpq(static_cast<index_t>(scale));
            mpz_class two;
            mpz_ui_pow_ui(two.get_mpz_t(), 2, static_cast<unsigned long>(k));
            return lhs * two <= 1;
        }
        return std::log(scale) + s.log_value(j) <= -k * std::log(2.0L) + 1e-15L;
    };
    Lemma47Result res;
    index_t n = 1;
    for (int k = 1;; ++k) {
        real bound = std::ldexp(1.0L, -k);
        while (n <= horizon && !(below(xi, n, static_cast<real>(n), k) && below(alpha, n, 1, k))) ++n;
        if (n > horizon) break;
        real target = k == 1 ? alpha.value(1) : 2 * bound;
        real s = 0;
        index_t m = n;
        for (; m <= horizon; ++m) {
            s += x[m];
            if (s >= target) break;
        }
        if (m > horizon) break;
        res.blocks.push_back({n, m, s});
        n = m + 1;
    }
    auto& c = res.certificate;
    c.name = "lemma47";
    c.horizon = std::to_string(horizon);
    if (res.blocks.size() < 3)
        throw domain_error("lemma_47_block_eta: only " + std::to_string(res.blocks.size()) +
                           " blocks completed within horizon " + std::to_string(horizon) + "; use a larger horizon");
    c.fact("blocks", std::to_string(res.blocks.size()));
    // η: ξ_{n_k} on (m_{k-1}, n_k), ξ on [n_k, m_k], zero after the last block.
    index_t end = res.blocks.back().m;
    auto vals = std::make_shared<std::vector<real>>(end + 1, neg_inf);
    index_t prev_m = 0;
    for (auto& b : res.blocks) {
        for (index_t j = prev_m + 1; j < b.n; ++j) (*vals)[j] = std::log(x[b.n]);
        for (index_t j = b.n; j <= b.m; ++j) (*vals)[j] = std::log(x[j]);
        prev_m = b.m;
    }
    FunctionNode::Spec spec;
    spec.label = "lemma47_eta";
    spec.log_value = [vals](index_t j) { return j < vals->size() ? (*vals)[j] : neg_inf; };
    spec.summable = Summable::yes;
    spec.support_end = end + 1;
    res.eta = function_sequence(std::move(spec));

    bool le = true;
    std::optional<std::string> w_le;
    for (index_t j = 1; j <= end; ++j)
        if ((*vals)[j] > std::log(x[j]) + 1e-15L) {
            le = false, w_le = std::to_string(j);
            break;
        }
    c.check("eta <= xi", le, "", w_le);
    for (std::size_t i = 0; i < res.blocks.size(); ++i) {
        auto& b = res.blocks[i];
        int k = static_cast<int>(i) + 1;
        real lo = k == 1 ? alpha.value(1) : std::ldexp(1.0L, 1 - k);
        real hi = k == 1 ? alpha.value(1) + 0.5L : std::ldexp(1.0L, 2 - k);
        c.check("block " + std::to_string(k) + " sum in bounds", b.block_sum >= lo && b.block_sum <= hi,
                "[" + std::to_string(b.n) + "," + std::to_string(b.m) + "] sum " + detail::fmt(b.block_sum));
        c.fact("block " + std::to_string(k), std::to_string(b.n) + ".." + std::to_string(b.m));
    }
    // α_n <= Σ_{j>n} η_j from the completed blocks.
    index_t upto = std::min<index_t>(check_upto, res.blocks.back().n - 1);
    std::vector<real> tail(end + 2, 0);
    for (index_t j = end; j >= 1; --j) tail[j - 1] = tail[j] + std::exp((*vals)[j]);
    std::optional<std::string> w_tail;
    for (index_t j = 1; j <= upto; ++j)
        if (alpha.value(j) > tail[j] * (1 + 1e-12L)) {
            w_tail = std::to_string(j);
            break;
        }
    c.check("alpha_n <= tail(eta)_n for n <= " + std::to_string(upto), !w_tail, "", w_tail);
    // Summability envelope: Σ η <= first block + Σ_k (2^{-k} + 2^{2-k}).
    real envelope = res.blocks[0].block_sum + 0.5L;
    for (std::size_t i = 1; i < res.blocks.size(); ++i) {
        int k = static_cast<int>(i) + 1;
        envelope += std::ldexp(1.0L, -k) + std::ldexp(1.0L, 2 - k);
    }
    c.check("sum eta within geometric envelope", tail[0] <= envelope,
            "sum " + detail::fmt(tail[0]) + " envelope " + detail::fmt(envelope));
    detail::finish(c, allow_partial);
    return res;
}

/// Demo input: ξ_1 = 1, ξ_n = c_k/n on (10^{k-1}, 10^k], c_k = 2^{-k} (k <= 12), 2^{-12}/(k-11) after.
inline Sequence lemma47_demo_xi() {
    FunctionNode::Spec spec;
    spec.label = "lemma47_demo_xi";
    spec.log_value = [](index_t n) -> real {
        if (n == 1) return 0;
        int k = 0;
        for (index_t p = 1; p < n; p *= 10) ++k;  // n in (10^{k-1}, 10^k]
        real lc = k <= 12 ? -k * std::log(2.0L) : -12 * std::log(2.0L) - std::log(static_cast<real>(k - 11));
        return lc - std::log(static_cast<real>(n));
    };
    spec.exact_value = [](index_t n) -> std::optional<mpq_class> {
        if (n == 1) return mpq_class(1);
        int k = 0;
        for (index_t p = 1; p < n; p *= 10) ++k;
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(std::min(k, 12)));
        if (k > 12) den *= k - 11;
        mpq_class v(mpz_class(1), den * to_mpz(n));
        v.canonicalize();
        return v;
    };
    spec.summable = Summable::no;
    return function_sequence(std::move(spec));
}

inline Sequence lemma47_demo_alpha() { return scale(mpq_class(2), geom(mpq_class(1, 2))); }

// ---------------------------------------------------------------------------
// Irregular minorant of a regular power and the comparison family.

// Indices reach ~1e100 at 30 levels; 120 digits keep them exact with room for the partial sums.
using bigfloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;

inline const bigfloat& big_eps() {
    static const bigfloat e = std::numeric_limits<bigfloat>::epsilon() * 1000;
    return e;
}

inline std::string big_str(const bigfloat& x, int digits = 20) {
    if (x == boost::multiprecision::floor(x) && x < bigfloat("1e60"))
        return boost::multiprecision::cpp_int(x).str();
    return x.str(digits, std::ios::scientific);
}

/// μ_n = c n^{-p} (0 < p < 1) and the minorant ξ with levels p_l:
/// ξ_{p_l} = μ_{p_l}/l, ξ_i = min(ξ_{p_l}, μ_i) for p_l < i < p_{l+1}.
class IrregularMinorant {
public:
    struct Level {
        bigfloat p;      // p_l
        bigfloat xi_p;   // ξ_{p_l}
        bigfloat s_xi;   // S_ξ(p_l)
        bigfloat flat;   // last index of the flat stretch ξ = ξ_{p_l}
    };

    IrregularMinorant(bigfloat c, bigfloat p) : c_(std::move(c)), p_(std::move(p)) {
        using std::pow;
        direct_.push_back(0);
        for (int i = 1; i <= direct_cut; ++i) direct_.push_back(direct_.back() + mu(bigfloat(i)));
        // Euler-Maclaurin endpoint terms at a = direct_cut.
        bigfloat a(direct_cut);
        a_terms_ = em_terms(a);
        levels_.push_back({bigfloat(1), mu(bigfloat(1)), mu(bigfloat(1)), bigfloat(1)});
    }

    const bigfloat& coeff() const { return c_; }
    const bigfloat& power() const { return p_; }

    bigfloat mu(const bigfloat& i) const {
        if (p_ == bigfloat(0.5)) return c_ / boost::multiprecision::sqrt(i);
        return c_ * boost::multiprecision::pow(i, -p_);
    }

    /// Σ_{i<=N} μ_i.
    bigfloat s_mu(const bigfloat& N) const {
        if (N <= direct_cut) return direct_[static_cast<int>(N)];
        bigfloat a(direct_cut);
        bigfloat integral = c_ * (boost::multiprecision::pow(N, 1 - p_) - boost::multiprecision::pow(a, 1 - p_)) / (1 - p_);
        // Σ_{a<i<=N} f(i) = ∫_a^N f + (f(N) - f(a))/2 + Σ B_{2k}/(2k)! (f^{(2k-1)}(N) - f^{(2k-1)}(a)).
        return direct_.back() + integral + (mu(N) - mu(a)) / 2 + em_terms(N) - a_terms_;
    }

    std::size_t level_count() const { return levels_.size(); }
    const Level& level(std::size_t l) const { return levels_.at(l - 1); }

    /// Extend until `count` levels exist.
    void build(std::size_t count) {
        while (levels_.size() < count) next_level();
    }

    /// Level l with p_l <= i < p_{l+1}, extending as needed.
    std::size_t level_of(const bigfloat& i) {
        while (levels_.back().p <= i) next_level();
        std::size_t lo = 0, hi = levels_.size() - 1;  // levels_[hi].p > i
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (levels_[mid].p <= i ? lo : hi) = mid;
        }
        return lo + 1;
    }

    bigfloat xi(const bigfloat& i) {
        auto l = level_of(i);
        auto& L = levels_[l - 1];
        if (i == L.p) return L.xi_p;
        return i <= L.flat ? L.xi_p : mu(i);
    }

    /// Σ_{i<=N} ξ_i.
    bigfloat s_xi(const bigfloat& N) {
        if (N < 1) return 0;
        auto l = level_of(N);
        return s_xi_in(levels_[l - 1], N);
    }

private:
    static constexpr int direct_cut = 1000;

    bigfloat em_terms(const bigfloat& x) const {
        // f^{(m)}(x) = c (-p)(-p-1)...(-p-m+1) x^{-p-m}
        const bigfloat eps = std::numeric_limits<bigfloat>::epsilon();
        bigfloat fx = mu(x);
        bigfloat sum = 0;
        bigfloat deriv = fx * (-p_) / x;  // f'(x)
        bigfloat fact = 2;                 // (2k)!
        for (int k = 1; k < 200; ++k) {
            bigfloat term = boost::math::bernoulli_b2n<bigfloat>(k) / fact * deriv;
            sum += term;
            if (boost::multiprecision::abs(term) < eps * boost::multiprecision::abs(sum) && k > 2) break;
            // advance derivative order by two: multiply by (-p-m)(-p-m-1)/x^2 with m = 2k-1
            bigfloat m(2 * k - 1);
            deriv = deriv * (-p_ - m) * (-p_ - m - 1) / (x * x);
            fact *= bigfloat(2 * k + 1) * bigfloat(2 * k + 2);
        }
        return sum;
    }

    bigfloat s_xi_in(const Level& L, const bigfloat& N) const {
        if (N <= L.flat) return L.s_xi + (N - L.p) * L.xi_p;
        return L.s_xi + (L.flat - L.p) * L.xi_p + s_mu(N) - s_mu(L.flat);
    }

    void next_level() {
        const Level& L = levels_.back();
        bigfloat l(static_cast<long>(levels_.size()));
        auto g = [&](const bigfloat& N) { return s_xi_in(L, N) - 3 * s_mu(N) / 4; };
        bigfloat N;
        if (g(L.p) >= 0) {
            N = L.p;
        } else {
            // g decreases up to i_min = p_l (3l/4)^{1/p}, increases after.
            bigfloat lo = boost::multiprecision::floor(L.p * boost::multiprecision::pow(3 * l / 4, 1 / p_));
            if (lo < L.p) lo = L.p;
            bigfloat hi = lo + 1;
            while (g(hi) < 0) hi *= 2;
            if (g(lo) >= 0) throw domain_error("irregular minorant: no sign change above the minimum");
            while (hi - lo > 1) {
                bigfloat mid = boost::multiprecision::floor((lo + hi) / 2);
                (g(mid) >= 0 ? hi : lo) = mid;
            }
            N = hi;
        }
        bigfloat q = N + 1 < 3 ? bigfloat(3) : N + 1;
        Level next;
        next.p = q;
        next.xi_p = mu(q) / (l + 1);
        next.s_xi = s_xi_in(L, q - 1) + next.xi_p;
        next.flat = boost::multiprecision::floor(q * boost::multiprecision::pow(l + 1, 1 / p_));
        levels_.push_back(std::move(next));
    }

    bigfloat c_, p_;
    std::vector<bigfloat> direct_;
    bigfloat a_terms_;
    std::vector<Level> levels_;
};

struct Theorem78Xi {
    std::shared_ptr<IrregularMinorant> engine;
    std::vector<bigfloat> p_list;
    ConstructionCertificate certificate;
};

/// Build ξ <= μ with ξ_{p_l} = μ_{p_l}/l and (ξ_a)_{p_l} >= (μ_a)_{p_l}/2 for l <= L.
inline Theorem78Xi theorem_78_xi(const Sequence& mu, int L = 20, bool allow_partial = false) {
    if (L < 1) throw domain_error("theorem_78_xi: L must be >= 1");
    if (mu.summable() == Summable::yes) throw domain_error("theorem_78_xi: mu is summable");
    auto reg = check_regular(mu);
    if (reg.verdict != Verdict::holds)
        throw domain_error("theorem_78_xi: mu is not regular (check_regular " + to_string(reg.verdict) + ")");
    auto mono = dynamic_cast<const MonomialNode*>(&mu.node());
    if (!mono || mono->ratio() || mono->r() != 0 || !(mono->p() > 0 && mono->p() < 1))
        throw domain_error("theorem_78_xi: only mu = c n^{-p} with 0 < p < 1 is supported");
    Theorem78Xi out;
    bigfloat c(mono->coeff().get_str());
    if (mono->coeff().get_den() != 1) c = bigfloat(mono->coeff().get_num().get_str()) / bigfloat(mono->coeff().get_den().get_str());
    out.engine = std::make_shared<IrregularMinorant>(c, bigfloat(static_cast<double>(mono->p())));
    auto& E = *out.engine;
    E.build(static_cast<std::size_t>(L));
    auto& cert = out.certificate;
    cert.name = "thm78xi";
    cert.horizon = "L=" + std::to_string(L);
    const bigfloat& tiny = big_eps();
    std::optional<std::string> w1, w2, w3, w4;
    for (int l = 1; l <= L; ++l) {
        auto& lev = E.level(l);
        out.p_list.push_back(lev.p);
        bigfloat mp = E.mu(lev.p);
        // (i) at the level point, the flat stretch and the first μ index.
        for (bigfloat i : {lev.p, lev.p + 1, lev.flat, lev.flat + 1})
            if (!w1 && E.xi(i) > E.mu(i) * (1 + tiny)) w1 = "i=" + big_str(i);
        // (ii)
        if (!w2 && boost::multiprecision::abs(lev.xi_p * l - mp) > tiny * mp) w2 = "l=" + std::to_string(l);
        // (iii)
        if (!w3 && !(2 * lev.s_xi >= E.s_mu(lev.p))) w3 = "l=" + std::to_string(l);
        // irregularity: ξ_{p_l}/(ξ_a)_{p_l} <= 2/l
        bigfloat r = lev.xi_p * lev.p / lev.s_xi;
        if (!w4 && r * l > 2 * (1 + tiny)) w4 = "l=" + std::to_string(l);
    }
    cert.check("(i) xi <= mu", !w1, "", w1);
    cert.check("(ii) xi_{p_l} = mu_{p_l}/l", !w2, "", w2);
    cert.check("(iii) (xi_a)_{p_l} >= (mu_a)_{p_l}/2", !w3, "", w3);
    cert.check("irregular: xi_{p_l}/(xi_a)_{p_l} <= 2/l", !w4, "", w4);
    std::string ps;
    for (std::size_t i = 0; i < out.p_list.size(); ++i) ps += (i ? "," : "") + big_str(out.p_list[i], 6);
    cert.fact("p_list", ps);
    detail::finish(cert, allow_partial);
    return out;
}

struct Theorem78Family {
    int N = 1, K = 0;
    // ladders[k-1][j-1] = (m_k^{(j)}, n_k^{(j)})
    std::vector<std::vector<std::pair<bigfloat, bigfloat>>> ladders;
    std::vector<bigfloat> m_next;  // m_{k+1}^{(N)}
    ConstructionCertificate certificate;
    std::shared_ptr<IrregularMinorant> engine;

    /// η^{(j)}_i inside the constructed range [1, m_{K+1}^{(N)}).
    bigfloat eta(int j, const bigfloat& i) const {
        auto& E = *engine;
        bigfloat x = E.xi(i);
        if (N == 1) return x;
        for (int k = 1; k <= K; ++k) {
            for (int p = N; p >= 1; --p) {
                auto& [m, n] = ladders[k - 1][p - 1];
                if (i >= m && i <= bigfloat(k) * n) return bigfloat(std::min(j, p)) * x;
            }
            bigfloat kn1 = bigfloat(k) * ladders[k - 1][0].second;
            if (i > kn1 && i < m_next[k - 1]) {
                bigfloat cap = E.xi(kn1), v = bigfloat(j) * x;
                return v < cap ? v : cap;
            }
        }
        throw domain_error("eta index outside the constructed range");
    }
};

/// Ladders m_k^{(j)} < n_k^{(j)} with conditions (a)-(d) and the sequences η^{(1..N)}.
inline Theorem78Family theorem_78_family(const Theorem78Xi& base, int N, int K, std::size_t max_levels = 200,
                                         bool allow_partial = false) {
    if (N < 1) throw domain_error("theorem_78_family: N must be >= 1");
    if (K < 1) throw domain_error("theorem_78_family: K must be >= 1");
    Theorem78Family fam;
    fam.N = N;
    fam.K = K;
    fam.engine = base.engine;
    auto& E = *fam.engine;
    auto& c = fam.certificate;
    c.name = "thm78family";
    c.horizon = "N=" + std::to_string(N) + ", K=" + std::to_string(K);
    if (N == 1) {
        c.check("degenerate family {xi}", true);
        return fam;
    }
    bigfloat m = 1;
    std::size_t l = 1;  // candidate level for the next n
    for (int k = 1; k <= K; ++k) {
        std::vector<std::pair<bigfloat, bigfloat>> row(N);
        for (int j = N; j >= 1; --j) {
            // (a) n ∈ {p_l}, l >= k, n > m; (b) Σ_{m}^{n} ξ >= 3 Σ_{1}^{m} ξ; first hit.
            l = std::max<std::size_t>(l, static_cast<std::size_t>(k));
            bigfloat need = 3 * E.s_xi(m);
            bigfloat before = E.s_xi(m - 1);
            while (true) {
                if (l > max_levels) {
                    c.check("ladder within level budget", false, "needed more than " + std::to_string(max_levels) + " levels",
                            "k=" + std::to_string(k) + ",j=" + std::to_string(j));
                    fam.ladders.push_back(row);
                    detail::finish(c, allow_partial);
                    return fam;
                }
                E.build(l);
                const bigfloat& p = E.level(l).p;
                if (p > m && E.s_xi(p) - before >= need) break;
                ++l;
            }
            row[j - 1] = {m, E.level(l).p};
            ++l;
            if (j > 1) m = bigfloat(k) * row[j - 1].second + 1;  // (c)
        }
        fam.ladders.push_back(row);
        // (d) first i with ξ_{k n_k^{(1)}} >= N ξ_i, scanned level by level.
        bigfloat kn1 = bigfloat(k) * row[0].second;
        bigfloat target = E.xi(kn1) / N;
        bigfloat s = kn1 + 1;
        std::size_t lv = E.level_of(s);
        bigfloat found = -1;
        while (found < 0) {
            E.build(lv + 1);
            auto& L = E.level(lv);
            bigfloat next_p = E.level(lv + 1).p;
            if (L.p >= s && L.xi_p <= target) {
                found = L.p;
                break;
            }
            bigfloat flat_from = s > L.p ? s : L.p + 1;
            if (flat_from <= L.flat && L.xi_p <= target) {
                found = flat_from;
                break;
            }
            // μ stretch: μ_i <= target ⟺ i >= (c/target)^{1/p}
            bigfloat i0 = boost::multiprecision::ceil(
                boost::multiprecision::pow(E.coeff() / target, 1 / E.power()));
            bigfloat from = L.flat + 1;
            if (from < s) from = s;
            if (i0 < from) i0 = from;
            while (i0 > from && E.mu(i0 - 1) <= target) i0 -= 1;
            while (E.mu(i0) > target) i0 += 1;
            if (i0 < next_p) {
                found = i0;
                break;
            }
            ++lv;
        }
        fam.m_next.push_back(found);
        m = found;
    }
    // Conditions (a)-(d) and the chain m_k^{(N)} < k n_k^{(N)} < ... < k n_k^{(1)} < m_{k+1}^{(N)}.
    std::optional<std::string> wa, wb, wc, wd, wo;
    for (int k = 1; k <= K; ++k) {
        auto& row = fam.ladders[k - 1];
        for (int j = 1; j <= N; ++j) {
            auto& [mk, nk] = row[j - 1];
            auto lv = E.level_of(nk);
            if (!wa && (E.level(lv).p != nk || lv < static_cast<std::size_t>(k)))
                wa = "k=" + std::to_string(k) + ",j=" + std::to_string(j);
            if (!wb && !(E.s_xi(nk) - E.s_xi(mk - 1) >= 3 * E.s_xi(mk)))
                wb = "k=" + std::to_string(k) + ",j=" + std::to_string(j);
            if (j >= 2 && !wc && row[j - 2].first != bigfloat(k) * nk + 1)
                wc = "k=" + std::to_string(k) + ",j=" + std::to_string(j);
            if (!wo && !(mk < nk)) wo = "k=" + std::to_string(k) + ",j=" + std::to_string(j);
        }
        bigfloat kn1 = bigfloat(k) * row[0].second;
        const bigfloat& d = fam.m_next[k - 1];
        bool first = E.xi(kn1) >= N * E.xi(d) && !(E.xi(kn1) >= N * E.xi(d - 1));
        if (!wd && !first) wd = "k=" + std::to_string(k);
        if (!wo && !(kn1 < d)) wo = "k=" + std::to_string(k);
    }
    c.check("(a) n_k^(j) in {p_l}, l >= k", !wa, "", wa);
    c.check("(b) block sum >= 3 x prefix sum", !wb, "", wb);
    c.check("(c) m_k^(j-1) = k n_k^(j) + 1", !wc, "", wc);
    c.check("(d) m_{k+1}^(N) first index with xi_{k n_k^(1)} >= N xi_i", !wd, "", wd);
    c.check("ladder strictly increasing", !wo, "", wo);

    // Pointwise order ξ = η^(1) <= ... <= η^(N) <= Nξ, η^(j) <= jξ, and monotone η^(j), at probes.
    std::vector<bigfloat> probes;
    auto add = [&](const bigfloat& i) {
        if (i >= 1 && i < fam.m_next.back()) probes.push_back(i);
    };
    for (int k = 1; k <= K; ++k) {
        for (auto& [mk, nk] : fam.ladders[k - 1]) {
            for (bigfloat i : {mk - 1, mk, mk + 1, nk, bigfloat(k) * nk - 1, bigfloat(k) * nk, bigfloat(k) * nk + 1}) add(i);
            bigfloat step = boost::multiprecision::pow(bigfloat(k) * nk / mk, bigfloat(1) / 8);
            for (bigfloat i = mk * step; i < bigfloat(k) * nk; i *= step) add(boost::multiprecision::floor(i));
        }
        add(fam.m_next[k - 1] - 1);
        bigfloat kn1 = bigfloat(k) * fam.ladders[k - 1][0].second;
        bigfloat step = boost::multiprecision::pow(fam.m_next[k - 1] / kn1, bigfloat(1) / 8);
        for (bigfloat i = kn1 * step; i < fam.m_next[k - 1]; i *= step) add(boost::multiprecision::floor(i));
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    const bigfloat& tol = big_eps();
    std::optional<std::string> w_chain, w_bound, w_mono;
    for (auto& i : probes) {
        bigfloat x = E.xi(i);
        bigfloat prev = fam.eta(1, i);
        if (!w_chain && boost::multiprecision::abs(prev - x) > tol * x) w_chain = "eta1 != xi at " + big_str(i);
        for (int j = 2; j <= N; ++j) {
            bigfloat e = fam.eta(j, i);
            if (!w_chain && e < prev * (1 - tol)) w_chain = "j=" + std::to_string(j) + " at " + big_str(i);
            if (!w_bound && e > j * x * (1 + tol)) w_bound = "j=" + std::to_string(j) + " at " + big_str(i);
            prev = e;
        }
        if (i + 1 < fam.m_next.back())
            for (int j = 1; j <= N; ++j)
                if (!w_mono && fam.eta(j, i + 1) > fam.eta(j, i) * (1 + tol))
                    w_mono = "j=" + std::to_string(j) + " at " + big_str(i);
    }
    c.check("xi = eta1 <= ... <= etaN <= N xi", !w_chain, "", w_chain);
    c.check("eta(j) <= j xi", !w_bound, "", w_bound);
    c.check("eta(j) nonincreasing at probes", !w_mono, "", w_mono);
    c.fact("probes", std::to_string(probes.size()));
    c.fact("m_{K+1}^(N)", big_str(fam.m_next.back(), 8));
    detail::finish(c, allow_partial);
    return fam;
}

// ---------------------------------------------------------------------------

/// Non-summable η with η = o(η_a), cross-checked against (η_a)_{2n}/(η_a)_n -> 1/2.
inline ClassReport dixmier_gap_check(const Sequence& eta, index_t window = default_window) {
    if (eta.summable() == Summable::yes) throw domain_error("dixmier_gap_check: the sequence is summable");
    real l1 = eta.log_value(1);
    if (l1 != neg_inf && eta.log_value(window) >= l1)
        throw domain_error("dixmier_gap_check: no decay on the window; the sequence is not in c_o^*");
    auto a = arithmetic_mean(eta);
    index_t half = window / 2;
    auto pts = detail::three_points(half);
    std::array<index_t, 3> from{pts[0], pts[1], static_cast<index_t>(std::pow(static_cast<double>(half), 0.75))};
    std::array<real, 3> t1{0, 0, 0}, t2{0, 0, 0};
    real r1 = 0, r2 = 0;
    for (index_t n = half; n >= from[0]; --n) {
        real la = a.log_value(n);
        r1 = std::max(r1, detail::safe_exp(eta.log_value(n) - la));
        r2 = std::max(r2, std::abs(detail::safe_exp(a.log_value(2 * n) - la) - 0.5L));
        for (int i = 0; i < 3; ++i)
            if (n == from[i]) t1[i] = r1, t2[i] = r2;
    }
    Verdict v1 = detail::zero_rule(t1[0], t1[1], t1[2]);
    Verdict v2 = detail::zero_rule(t2[0], t2[1], t2[2]);
    ClassReport r;
    r.property = "dixmier_gap";
    r.window_hi = window;
    r.trend = t1;
    r.trend_at = from;
    r.notes.push_back("eta/eta_a tail sup " + detail::fmt(t1[2]) + ": " + to_string(v1));
    r.notes.push_back("|(eta_a)_2n/(eta_a)_n - 1/2| tail sup " + detail::fmt(t2[2]) + ": " + to_string(v2));
    if (v1 == v2)
        r.verdict = v1;
    else {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("criteria disagree");
    }
    if (r.verdict == Verdict::fails) r.witness = from[2];
    r.constant = t1[2];
    return r;
}

/// ξ = 1 on [1, 2j-1], 0 after, with (D_2 ξ_{a∞})_{2j-1} = (j-1)/j < 1 = ξ_{2j-1}.
inline std::pair<Sequence, ConstructionCertificate> remark_42_witness(index_t j) {
    if (j < 2) throw domain_error("remark_42_witness: j must be >= 2");
    auto xi = finite_sequence(std::vector<mpq_class>(2 * j - 1, mpq_class(1)), "remark42");
    auto A = am_infinity(xi);
    auto D2 = ampliation(A, 2);
    ConstructionCertificate c;
    c.name = "remark42";
    c.horizon = "j=" + std::to_string(j);
    mpq_class lhs = D2.exact_or_throw(2 * j - 1);
    mpq_class expect(static_cast<long>(j - 1), static_cast<unsigned long>(j));
    c.check("(D_2 xi_ainf)_{2j-1} = (j-1)/j", lhs == expect, lhs.get_str());
    c.check("(j-1)/j < xi_{2j-1} = 1", lhs < xi.exact_or_throw(2 * j - 1));
    std::optional<std::string> w;
    for (index_t n = 1; n <= 2 * j + 2; ++n) {
        mpq_class want = n < 2 * j - 1 ? mpq_class(static_cast<long>(2 * j - 1 - n), static_cast<unsigned long>(n)) : mpq_class(0);
        want.canonicalize();
        if (A.exact_or_throw(n) != want) {
            w = std::to_string(n);
            break;
        }
    }
    c.check("(xi_ainf)_n = (2j-1-n)/n", !w, "", w);
    c.fact("(D_2 xi_ainf)_{2j-1}", lhs.get_str());
    detail::finish(c, false);
    return {xi, c};
}

}  // namespace amseq
