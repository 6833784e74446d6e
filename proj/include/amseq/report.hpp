#pragma once

/**
 * @file report.hpp
 * @brief JSON serialization of classifier, ideal and construction results, and the Report document.
 *
 * Everything except the "timing" object is a pure function of inputs and configuration.
 */

#include "constructions.hpp"

#include "json.hpp"

#include <sstream>

namespace amseq {

using json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "amseq.report/1";

/// Finite reals become numbers; infinities and NaN become strings so the document stays valid JSON.
inline json jreal(real x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return static_cast<double>(x);
}

template <class T>
json jopt(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_floating_point_v<T>) return jreal(*v);
    else return *v;
}

inline json to_json(const ClassReport& r) {
    json j;
    j["property"] = r.property;
    j["verdict"] = to_string(r.verdict);
    j["window"] = {r.window_lo, r.window_hi};
    j["witness"] = jopt(r.witness);
    j["constant"] = jopt(r.constant);
    j["constant_last_window"] = jopt(r.constant_last_window);
    j["trend"] = json::array();
    for (int i = 0; i < 3; ++i) j["trend"].push_back({{"n", r.trend_at[i]}, {"value", jreal(r.trend[i])}});
    if (r.m) j["m"] = *r.m;
    j["notes"] = r.notes;
    return j;
}

inline json to_json(const IndexEstimate& e) {
    json j;
    j["alpha"] = jreal(e.alpha);
    j["beta"] = jreal(e.beta);
    j["alpha_trend"] = {jreal(e.alpha_trend[0]), jreal(e.alpha_trend[1]), jreal(e.alpha_trend[2])};
    j["beta_trend"] = {jreal(e.beta_trend[0]), jreal(e.beta_trend[1]), jreal(e.beta_trend[2])};
    j["window"] = e.window;
    j["k_cap"] = e.k_cap;
    j["probes"] = e.n_probes;
    j["extended"] = e.extended;
    j["alpha_to_minus_infinity"] = e.alpha_to_minus_infinity;
    j["analytic_bounds_applied"] = e.analytic_bounds_applied;
    j["alpha_upper"] = jopt(e.alpha_upper);
    j["beta_lower"] = jopt(e.beta_lower);
    return j;
}

inline json to_json(const AnalyticBounds& b) {
    return {{"alpha_upper", jopt(b.alpha_upper)}, {"beta_lower", jopt(b.beta_lower)}};
}

inline json to_json(const CrossCheck& c) {
    json j;
    j["consensus"] = to_string(c.consensus);
    j["agreement"] = c.agreement;
    j["complete"] = c.complete;
    j["conditions"] = json::array();
    for (auto& r : c.conditions) j["conditions"].push_back(to_json(r));
    j["alpha_estimate"] = to_json(c.alpha_estimate);
    return j;
}

inline json to_json(const TraceVerdict& t) {
    json j;
    j["value"] = to_string(t.value);
    j["chain"] = json::array();
    for (auto& [step, v] : t.chain) j["chain"].push_back({{"step", step}, {"verdict", v}});
    j["notes"] = t.notes;
    if (t.cross_check) j["cross_check"] = to_json(*t.cross_check);
    return j;
}

inline json to_json(const SizeReport& s) {
    return {{"value", to_string(s.value)}, {"depth", s.depth}, {"caveat", s.caveat}, {"notes", s.notes}};
}

inline json to_json(const ConstructionCertificate& c) {
    json j;
    j["name"] = c.name;
    j["horizon"] = c.horizon;
    j["ok"] = c.ok();
    j["partial"] = c.partial;
    j["checks"] = json::array();
    for (auto& ch : c.checks) {
        json x{{"name", ch.name}, {"verdict", ch.ok ? "holds" : "fails"}};
        if (!ch.detail.empty()) x["detail"] = ch.detail;
        if (ch.witness) x["witness"] = *ch.witness;
        j["checks"].push_back(std::move(x));
    }
    j["facts"] = json::object();
    for (auto& [k, v] : c.facts) j["facts"][k] = v;
    return j;
}

/// One invocation's document. Status folds into the exit code: 0 definite, 2 inconclusive, 1 error.
class Report {
public:
    explicit Report(std::string command) {
        doc_["schema"] = report_schema;
        doc_["command"] = std::move(command);
        doc_["input"] = json::object();
        doc_["config"] = json::object();
        doc_["results"] = json::array();
    }

    json& input() { return doc_["input"]; }
    json& config() { return doc_["config"]; }

    /// Append a result; its verdict-like fields feed the status.
    void add(std::string operation, json body, bool hard_failure = false) {
        json out{{"operation", std::move(operation)}};
        out.update(body);
        scan(out);
        if (hard_failure) hard_failure_ = true;
        doc_["results"].push_back(std::move(out));
    }

    void skip(std::string operation, std::string reason) {
        doc_["results"].push_back({{"operation", std::move(operation)}, {"skipped", std::move(reason)}});
    }

    void error(const std::string& message) {
        error_ = true;
        doc_["error"] = message;
    }

    void note(std::string text) { doc_["notes"].push_back(std::move(text)); }

    void mark_inconclusive() { inconclusive_ = true; }
    void mark_hard_failure() { hard_failure_ = true; }

    int exit_code() const {
        if (error_ || hard_failure_) return 1;
        return inconclusive_ ? 2 : 0;
    }

    std::string status() const {
        if (error_) return "error";
        if (hard_failure_) return "failed";
        return inconclusive_ ? "inconclusive" : "definite";
    }

    /// Finished document; timing is attached last and never mixed into the body.
    json finish(double wall_seconds) const {
        json d = doc_;
        d["status"] = status();
        d["exit_code"] = exit_code();
        d["timing"] = {{"wall_seconds", wall_seconds}};
        return d;
    }

    json body() const {
        json d = doc_;
        d["status"] = status();
        d["exit_code"] = exit_code();
        return d;
    }

private:
    void scan(const json& j) {
        if (j.is_object()) {
            for (auto& [k, v] : j.items()) {
                if ((k == "verdict" || k == "consensus") && v == "inconclusive") inconclusive_ = true;
                if (k == "value" && v == "unknown") inconclusive_ = true;
                scan(v);
            }
        } else if (j.is_array()) {
            for (auto& v : j) scan(v);
        }
    }

    json doc_;
    bool error_ = false, hard_failure_ = false, inconclusive_ = false;
};

namespace detail {

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline void render(std::ostream& os, const json& j, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) {
            if (v.is_structured() && !v.empty()) {
                os << pad << k << ":\n";
                render(os, v, depth + 1);
            } else {
                os << pad << k << ": " << (v.is_structured() ? std::string("-") : scalar_text(v)) << "\n";
            }
        }
    } else if (j.is_array()) {
        bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return !x.is_structured(); });
        if (flat) {
            os << pad;
            for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << scalar_text(j[i]);
            os << "\n";
            return;
        }
        for (auto& v : j) {
            os << pad << "-\n";
            render(os, v, depth + 1);
        }
    } else {
        os << pad << scalar_text(j) << "\n";
    }
}

}  // namespace detail

/// Indented key/value rendering for terminals.
inline std::string render_text(const json& doc) {
    std::ostringstream os;
    detail::render(os, doc, 0);
    return os.str();
}

}  // namespace amseq
