#pragma once

/**
 * @file parse.hpp
 * @brief Text form of SeqExpr and the prefix-file reader.
 *
 *   expr   := factor {('*'|'/') factor}
 *   factor := 'omega' ['^' real] | 'log' ['^' real] | 'geom(' rational ')'
 *           | 'D' int '(' expr ')' | 'Dinv' int '(' expr ')'
 *           | 'min(' expr ',' expr {',' expr} ')' | 'max(' ... ')' | 'sum(' ... ')'
 *           | 'scale(' rational ',' expr ')' | 'override([' rational {',' rational} '],' expr ')'
 *           | 'prefix(' path ')' | 'pw(' rulename ')'
 *
 * Division is accepted for omega and log factors only and is printed back as a
 * negative exponent.
 */

#include "expr.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace amseq {

struct parse_error : domain_error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : domain_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

/// Options for reading prefix files.
struct PrefixOptions {
    bool monotonize = false;
    std::string base_dir;
};

struct PrefixFile {
    std::vector<mpq_class> values;
    bool monotonized = false;
};

/// Read one value per line (decimal or p/q); '#' starts a comment; blank lines ignored.
inline PrefixFile read_prefix_stream(std::istream& in, const std::string& label, bool allow_monotonize) {
    PrefixFile out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.values.push_back(parse_rational(line));
        } catch (const domain_error& e) {
            throw domain_error(label + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    bool bad = false;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (sgn(out.values[i]) < 0 || (i > 0 && out.values[i] > out.values[i - 1])) {
            bad = true;
            if (!allow_monotonize) {
                throw domain_error(label + ": entry " + std::to_string(i + 1) +
                                   (sgn(out.values[i]) < 0 ? " is negative" : " breaks monotonicity") +
                                   " (pass --monotonize to rearrange)");
            }
        }
    }
    if (bad) {
        for (auto& v : out.values)
            if (sgn(v) < 0) throw domain_error(label + ": negative entries cannot be monotonized");
        auto seq = monotonize(out.values);
        auto& node = dynamic_cast<const FinitePrefixNode&>(seq.node());
        out.values = node.values();
        out.monotonized = true;
    }
    return out;
}

inline PrefixFile read_prefix_file(const std::string& path, const PrefixOptions& opt = {}) {
    std::string full = opt.base_dir.empty() || (!path.empty() && path[0] == '/') ? path : opt.base_dir + "/" + path;
    std::ifstream in(full);
    if (!in) throw domain_error("cannot open prefix file '" + full + "'");
    return read_prefix_stream(in, path, opt.monotonize);
}

class Parser {
public:
    Parser(std::string text, PrefixOptions opt = {}) : s_(std::move(text)), opt_(std::move(opt)) {}

    SeqExpr parse() {
        SeqExpr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

    /// Set when a prefix file was rearranged under the monotonize option.
    bool monotonized() const { return monotonized_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool keyword(const std::string& kw) {
        skip_ws();
        if (s_.compare(pos_, kw.size(), kw) != 0) return false;
        std::size_t end = pos_ + kw.size();
        if (end < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
        pos_ = end;
        return true;
    }

    double real_literal() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string tok = s_.substr(start, pos_ - start);
        if (tok.empty() || tok == "-" || tok == "+") {
            pos_ = start;
            fail("expected a real number");
        }
        double v = 0;
        auto r = std::from_chars(tok.data() + (tok[0] == '+' ? 1 : 0), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
            pos_ = start;
            fail("bad real number '" + tok + "'");
        }
        return v;
    }

    mpq_class rational_literal() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || std::string("+-./eE").find(s_[pos_]) != std::string::npos))
            ++pos_;
        try {
            return parse_rational(s_.substr(start, pos_ - start));
        } catch (const domain_error&) {
            pos_ = start;
            fail("expected a rational number");
        }
    }

    index_t int_literal() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        index_t v = 0;
        auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (r.ec != std::errc()) fail("integer out of range");
        if (v == 0) {
            pos_ = start;
            fail("factor must be >= 1");
        }
        return v;
    }

    std::string raw_until_paren() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
        std::string t = s_.substr(start, pos_ - start);
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
        if (t.empty()) fail("expected a name");
        return t;
    }

    SeqExpr expr() {
        std::vector<SeqExpr> factors;
        factors.push_back(factor());
        while (true) {
            if (eat('*')) {
                factors.push_back(factor());
            } else if (eat('/')) {
                std::size_t at = pos_;
                SeqExpr f = factor();
                if (f.kind != SeqExpr::Kind::omega_pow && f.kind != SeqExpr::Kind::log_pow) {
                    pos_ = at;
                    fail("only omega and log factors may appear after '/'");
                }
                f.exponent = -f.exponent;
                factors.push_back(std::move(f));
            } else {
                break;
            }
        }
        return SeqExpr::product(std::move(factors));
    }

    std::vector<SeqExpr> arg_list(std::size_t min_count) {
        expect('(');
        std::vector<SeqExpr> xs;
        xs.push_back(expr());
        while (eat(',')) xs.push_back(expr());
        expect(')');
        if (xs.size() < min_count) fail("expected at least " + std::to_string(min_count) + " arguments");
        return xs;
    }

    SeqExpr factor() {
        skip_ws();
        if (keyword("omega")) {
            double p = 1;
            if (eat('^')) p = real_literal();
            return SeqExpr::omega(p);
        }
        if (keyword("log")) {
            double r = 1;
            if (eat('^')) r = real_literal();
            return SeqExpr::log(r);
        }
        if (keyword("geom")) {
            expect('(');
            std::size_t at = pos_;
            mpq_class q = rational_literal();
            if (sgn(q) <= 0 || q >= 1) throw parse_error("geometric ratio must lie in (0,1)", at);
            expect(')');
            return SeqExpr::geom(q);
        }
        if (keyword("min")) return SeqExpr::min(arg_list(2));
        if (keyword("max")) return SeqExpr::max(arg_list(2));
        if (keyword("sum")) return SeqExpr::sum(arg_list(2));
        if (keyword("scale")) {
            expect('(');
            mpq_class c = rational_literal();
            expect(',');
            SeqExpr child = expr();
            expect(')');
            return SeqExpr::scale(c, std::move(child));
        }
        if (keyword("override")) {
            expect('(');
            expect('[');
            std::vector<mpq_class> vals;
            if (!eat(']')) {
                vals.push_back(rational_literal());
                while (eat(',')) vals.push_back(rational_literal());
                expect(']');
            }
            expect(',');
            SeqExpr child = expr();
            expect(')');
            return SeqExpr::override_prefix(std::move(vals), std::move(child));
        }
        if (keyword("prefix")) {
            expect('(');
            std::string path = raw_until_paren();
            expect(')');
            PrefixOptions o = opt_;
            PrefixFile f = read_prefix_file(path, o);
            monotonized_ |= f.monotonized;
            return SeqExpr::prefix(path, std::move(f.values));
        }
        if (keyword("pw")) {
            expect('(');
            std::size_t at = pos_;
            std::string name = raw_until_paren();
            auto known = pw_rule_names();
            if (std::find(known.begin(), known.end(), name) == known.end())
                throw parse_error("unknown piecewise rule '" + name + "'", at);
            expect(')');
            return SeqExpr::pw(name);
        }
        if (s_.compare(pos_, 4, "Dinv") == 0) {
            pos_ += 4;
            index_t m = int_literal();
            expect('(');
            SeqExpr child = expr();
            expect(')');
            return SeqExpr::dil(m, std::move(child));
        }
        if (pos_ < s_.size() && s_[pos_] == 'D') {
            ++pos_;
            index_t m = int_literal();
            expect('(');
            SeqExpr child = expr();
            expect(')');
            return SeqExpr::ampl(m, std::move(child));
        }
        if (eat('(')) {
            SeqExpr e = expr();
            expect(')');
            return e;
        }
        fail("expected a factor");
    }

    std::string s_;
    PrefixOptions opt_;
    std::size_t pos_ = 0;
    bool monotonized_ = false;
};

inline SeqExpr parse(const std::string& text, const PrefixOptions& opt = {}) { return Parser(text, opt).parse(); }

inline std::string print(const SeqExpr& e) {
    using K = SeqExpr::Kind;
    auto list = [](const std::vector<SeqExpr>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + print(xs[i]);
        return s;
    };
    switch (e.kind) {
        case K::omega_pow: return e.exponent == 1 ? "omega" : "omega^" + format_real(e.exponent);
        case K::log_pow: return e.exponent == 1 ? "log" : "log^" + format_real(e.exponent);
        case K::geom: return "geom(" + e.rational.get_str() + ")";
        case K::ampliation: return "D" + std::to_string(e.m) + "(" + print(e.children[0]) + ")";
        case K::dilution: return "Dinv" + std::to_string(e.m) + "(" + print(e.children[0]) + ")";
        case K::scale: return "scale(" + e.rational.get_str() + "," + print(e.children[0]) + ")";
        case K::sum: return "sum(" + list(e.children) + ")";
        case K::min: return "min(" + list(e.children) + ")";
        case K::max: return "max(" + list(e.children) + ")";
        case K::product: {
            std::string s;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                const auto& c = e.children[i];
                std::string t = print(c);
                if (c.kind == K::product) t = "(" + t + ")";
                s += (i ? "*" : "") + t;
            }
            return s;
        }
        case K::prefix_override: {
            std::string s = "override([";
            for (std::size_t i = 0; i < e.values.size(); ++i) s += (i ? "," : "") + e.values[i].get_str();
            return s + "]," + print(e.children[0]) + ")";
        }
        case K::piecewise: return "pw(" + e.name + ")";
        case K::prefix: return "prefix(" + e.name + ")";
    }
    return "?";
}

}  // namespace amseq
