#pragma once

// Command-line orchestration: ingest P-values and weights, normalize,
// cluster, pick or honor a combining method, and emit a human-readable table
// plus an optional machine-readable report. The report embeds the inputs at
// full precision, so a --verify pass can re-ingest it, recompute, and check
// that combined_p reproduces bit-for-bit.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcomb/cluster.hpp"
#include "pcomb/exact.hpp"
#include "pcomb/expansion.hpp"
#include "pcomb/json_writer.hpp"
#include "pcomb/normalize.hpp"
#include "pcomb/oracle.hpp"
#include "pcomb/types.hpp"

namespace pcomb {

enum class Method { fisher, good, general, expansion, auto_select };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::fisher: return "fisher";
    case Method::good: return "good";
    case Method::general: return "general";
    case Method::expansion: return "expansion";
    case Method::auto_select: return "auto";
    }
    return "auto";
}

inline Method parse_method(const std::string& name) {
    if (name == "fisher") return Method::fisher;
    if (name == "good") return Method::good;
    if (name == "general") return Method::general;
    if (name == "expansion") return Method::expansion;
    if (name == "auto") return Method::auto_select;
    throw std::invalid_argument("unknown method '" + name
                                + "' (expected fisher|good|general|expansion|auto)");
}

struct RunConfig {
    Method method = Method::auto_select;
    bool method_set = false; // true when given on the command line
    double eta = 0.05;
    bool eta_set = false;
    int order = 4;
    bool order_set = false;
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::optional<std::uint64_t> mc_check;
    std::optional<int> precision_digits;
    std::string input_path = "-";
    enum class Format { csv, doc } format = Format::csv;
    std::string out_path;    // structured report destination; empty = none
    std::string verify_path; // when set, verification mode
};

// User-facing failures carry exit code 2 (bad input or configuration).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool parse_double_token(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::string read_stream_or_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open input");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// CSV with header `p,weight` or `log_p,weight`. Blank lines are skipped;
// every complaint names the offending line.
inline WeightedPValues parse_csv(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool log_mode = false;
    bool have_header = false;
    WeightedPValues out;

    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) {
            line.erase(0, 3);
        }
        const std::string row = trim(line);
        if (row.empty()) {
            continue;
        }
        const std::size_t comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
            throw InputError(path + ":" + std::to_string(lineno)
                             + ": expected two comma-separated fields");
        }
        const std::string left = trim(row.substr(0, comma));
        const std::string right = trim(row.substr(comma + 1));
        if (!have_header) {
            if (left == "p" && right == "weight") {
                log_mode = false;
            } else if (left == "log_p" && right == "weight") {
                log_mode = true;
            } else {
                throw InputError(path + ":" + std::to_string(lineno)
                                 + ": header must be 'p,weight' or 'log_p,weight'");
            }
            have_header = true;
            continue;
        }
        double v = 0.0;
        double w = 0.0;
        if (!parse_double_token(left, v)) {
            throw InputError(path + ":" + std::to_string(lineno) + ": cannot parse '" + left
                             + "' as a number");
        }
        if (!parse_double_token(right, w)) {
            throw InputError(path + ":" + std::to_string(lineno) + ": cannot parse '" + right
                             + "' as a number");
        }
        if (std::isnan(w) || !(w > 0.0) || std::isinf(w)) {
            throw InputError(path + ":" + std::to_string(lineno) + ": weight must be positive");
        }
        if (log_mode) {
            if (std::isnan(v) || v > 0.0 || std::isinf(v)) {
                throw InputError(path + ":" + std::to_string(lineno)
                                 + ": log_p must be finite and <= 0");
            }
            out.push_log_p(v, w);
        } else {
            if (std::isnan(v) || !(v > 0.0) || v > 1.0) {
                throw InputError(path + ":" + std::to_string(lineno) + ": p must be in (0, 1]");
            }
            out.push_p(v, w);
        }
    }
    if (!have_header) {
        throw InputError(path + ": empty input; expected a 'p,weight' or 'log_p,weight' header");
    }
    if (out.size() == 0) {
        throw InputError(path + ": no data rows after the header");
    }
    return out;
}

// Structured document: {"items": [{"p"|"log_p", "weight"}...], optional
// method/eta/order/seed/mc_check/precision}. Document settings fill in only
// where the command line did not specify a value.
inline WeightedPValues parse_doc(const std::string& text, const std::string& path, RunConfig& cfg) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": invalid document: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()
        || doc["items"].empty()) {
        throw InputError(path + ": document must contain a non-empty 'items' array");
    }

    WeightedPValues out;
    std::size_t idx = 0;
    for (const auto& item : doc["items"]) {
        const std::string label = path + ": items[" + std::to_string(idx) + "]";
        if (!item.is_object() || !item.contains("weight") || !item["weight"].is_number()) {
            throw InputError(label + ": needs a numeric 'weight'");
        }
        const bool has_p = item.contains("p");
        const bool has_log = item.contains("log_p");
        if (has_p == has_log) {
            throw InputError(label + ": needs exactly one of 'p' or 'log_p'");
        }
        const double w = item["weight"].get<double>();
        if (std::isnan(w) || !(w > 0.0) || std::isinf(w)) {
            throw InputError(label + ": weight must be positive");
        }
        if (has_p) {
            if (!item["p"].is_number()) {
                throw InputError(label + ": 'p' must be a number");
            }
            const double p = item["p"].get<double>();
            if (std::isnan(p) || !(p > 0.0) || p > 1.0) {
                throw InputError(label + ": p must be in (0, 1]");
            }
            out.push_p(p, w);
        } else {
            if (!item["log_p"].is_number()) {
                throw InputError(label + ": 'log_p' must be a number");
            }
            const double lp = item["log_p"].get<double>();
            if (std::isnan(lp) || lp > 0.0 || std::isinf(lp)) {
                throw InputError(label + ": log_p must be finite and <= 0");
            }
            out.push_log_p(lp, w);
        }
        ++idx;
    }

    if (!cfg.method_set && doc.contains("method")) {
        if (!doc["method"].is_string()) {
            throw InputError(path + ": 'method' must be a string");
        }
        cfg.method = parse_method(doc["method"].get<std::string>());
    }
    if (!cfg.eta_set && doc.contains("eta")) {
        if (!doc["eta"].is_number()) {
            throw InputError(path + ": 'eta' must be a number");
        }
        cfg.eta = doc["eta"].get<double>();
    }
    if (!cfg.order_set && doc.contains("order")) {
        if (!doc["order"].is_number_integer()) {
            throw InputError(path + ": 'order' must be an integer");
        }
        cfg.order = doc["order"].get<int>();
    }
    if (!cfg.seed_set && doc.contains("seed")) {
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (!cfg.mc_check && doc.contains("mc_check")) {
        cfg.mc_check = doc["mc_check"].get<std::uint64_t>();
    }
    if (!cfg.precision_digits && doc.contains("precision")) {
        cfg.precision_digits = doc["precision"].get<int>();
    }
    return out;
}

} // namespace detail

// Everything a run produced, shared by the table printer, the report writer,
// and the verifier.
struct Analysis {
    RunConfig cfg;              // settings after document merge
    Method requested = Method::auto_select;
    std::string method;         // resolved method actually used
    WeightedPValues input;
    NormalizedInverseWeights niw;
    LogTau t;                   // normalized statistic
    ClusterSet cs;
    double combined_p = 0.0;
    std::optional<double> fisher_t;          // argument used by the fisher path
    std::optional<GoodResult> good;
    std::optional<GeneralResult> general;
    std::optional<CombinedResult> expansion;
    Diagnostics diag;
    double truncation_bound = 0.0;
    bool order_insufficient = false;
    std::vector<std::string> warnings;
    std::optional<MonteCarloEstimate> mc;
    std::optional<std::pair<double, int>> hp; // value, digits
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace detail

// Core pipeline, shared by normal runs and --verify recomputation. Throws
// InputError (and library domain errors) for anything worth exit code 2.
inline Analysis analyze(WeightedPValues input, const RunConfig& cfg) {
    if (std::isnan(cfg.eta) || cfg.eta < 0.0) {
        throw InputError("eta must be non-negative");
    }
    if (cfg.order < 0 || cfg.order > max_supported_order) {
        throw InputError("order must be between 0 and " + std::to_string(max_supported_order));
    }
    if (cfg.precision_digits && *cfg.precision_digits < 30) {
        throw InputError("precision must be at least 30 digits");
    }

    Analysis a;
    a.cfg = cfg;
    a.requested = cfg.method;
    a.input = std::move(input);
    a.niw = normalize_inverse_weights(a.input);
    a.t = compute_t(a.input, a.niw);
    a.cs = cluster(a.niw, cfg.eta);

    // Auto selection: fisher is the zero-spread single-cluster degenerate
    // case; distinct exact groups go to the general closed form; anything
    // with within-cluster spread needs the expansion.
    Method resolved = cfg.method;
    bool fisher_on_cluster = false;
    if (resolved == Method::auto_select) {
        if (a.cs.count() == 1 && a.cs.zero_deviation()) {
            resolved = Method::fisher;
            fisher_on_cluster = true;
        } else if (a.cs.zero_deviation()) {
            resolved = Method::general;
        } else {
            resolved = Method::expansion;
        }
    }
    a.method = method_name(resolved);

    const int L = static_cast<int>(a.input.size());
    switch (resolved) {
    case Method::fisher: {
        double tf = 0.0;
        if (fisher_on_cluster) {
            // Single effective cluster: the grouped formula collapses to
            // H(r1 * t, M - 1) with r1 the common center.
            tf = a.cs.clusters[0].center * a.t.t;
        } else {
            // Classic equal-weight combination; weights are ignored.
            NeumaierSum sum;
            for (const PValueItem& item : a.input.items) {
                if (std::isinf(item.log_p)) {
                    throw std::domain_error("combined P-value is 0; supply log_p finite");
                }
                sum.add(-item.log_p);
            }
            tf = sum.value();
        }
        a.fisher_t = tf;
        a.combined_p = fisher_combine(LogTau{tf}, L);
        a.diag = detail::make_diagnostics(a.combined_p, a.combined_p);
        break;
    }
    case Method::good: {
        a.good = good_combine(a.niw, a.t);
        a.combined_p = a.good->probability;
        a.diag = a.good->diag;
        break;
    }
    case Method::general: {
        a.general = general_combine(a.cs, a.t);
        a.combined_p = a.general->probability;
        a.diag = a.general->diag;
        break;
    }
    case Method::expansion: {
        a.expansion = expansion_combine(a.cs, a.t, cfg.order);
        a.combined_p = a.expansion->combined_p;
        a.diag = a.expansion->diag;
        a.truncation_bound = a.expansion->truncation_bound;
        a.order_insufficient = a.expansion->order_insufficient;
        break;
    }
    case Method::auto_select:
        break; // unreachable; resolved above
    }

    if (a.diag.cancellation_warning) {
        a.warnings.push_back("cancellation index " + detail::fmt4(a.diag.cancellation_index)
                             + " exceeds 8: most floating-point digits were lost; "
                               "prefer --method expansion");
    }
    if (a.combined_p < 0.0) {
        a.warnings.push_back("combined_p is negative: catastrophic cancellation; "
                             "the value is untrustworthy");
    }
    if (a.order_insufficient) {
        a.warnings.push_back("truncation bound exceeds |combined_p|: raise --order "
                             "or lower --eta");
    }

    if (cfg.mc_check) {
        // Check the statistic the resolved formula actually inverts: the
        // classic fisher path weighs every item equally.
        if (resolved == Method::fisher && !fisher_on_cluster) {
            WeightedPValues flat = a.input;
            for (PValueItem& item : flat.items) {
                item.weight = 1.0;
            }
            a.mc = mc_estimate(flat, LogTau{*a.fisher_t}, *cfg.mc_check, cfg.seed);
        } else {
            a.mc = mc_estimate(a.input, a.t, *cfg.mc_check, cfg.seed);
        }
    }

    if (cfg.precision_digits) {
        const int digits = *cfg.precision_digits;
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < a.niw.size(); ++i) {
            distinct = distinct && a.niw.r[i] != a.niw.r[i + 1];
        }
        if (distinct) {
            a.hp = std::make_pair(hp_evaluate(a.niw, a.t, digits), digits);
        } else if (a.cs.zero_deviation()) {
            a.hp = std::make_pair(hp_evaluate(a.cs, a.t, digits), digits);
        } else {
            a.warnings.push_back("high-precision check skipped: duplicate weights mixed with "
                                 "spread clusters fit neither exact form");
        }
    }
    return a;
}

inline void print_human(const Analysis& a, std::ostream& out) {
    using detail::fmt17;
    using detail::fmt4;
    out << "items:              " << a.input.size() << "\n";
    out << "requested method:   " << method_name(a.requested) << "\n";
    out << "method:             " << a.method << "\n";
    out << "eta:                " << fmt17(a.cfg.eta) << "\n";
    if (a.method == "expansion") {
        out << "order:              " << a.cfg.order << "\n";
    }
    out << "t:                  " << fmt17(a.t.t) << "\n";
    if (auto tau = tau_if_representable(a.t)) {
        out << "tau:                " << fmt17(*tau) << "\n";
    } else {
        out << "tau:                underflows (t >= 700), kept in log space\n";
    }
    out << "normalized r:      ";
    if (a.niw.size() <= 8) {
        for (double r : a.niw.r) {
            out << " " << fmt17(r);
        }
        out << "\n";
    } else {
        out << " M = " << a.niw.size() << ", range [" << fmt17(a.niw.r.front()) << ", "
            << fmt17(a.niw.r.back()) << "]\n";
    }
    out << "clusters (m = " << a.cs.count() << "):\n";
    for (std::size_t k = 0; k < a.cs.count(); ++k) {
        const Cluster& c = a.cs.clusters[k];
        out << "  [" << k << "] center " << fmt17(c.center) << "  n " << c.size() << "  spread "
            << fmt4(c.spread) << "\n";
    }
    out << "terms:\n";
    if (a.fisher_t) {
        out << "  H(" << fmt17(*a.fisher_t) << ", " << (a.input.size() - 1) << ") = "
            << fmt17(a.combined_p) << "\n";
    } else if (a.good) {
        for (std::size_t l = 0; l < a.good->terms.size(); ++l) {
            out << "  r " << fmt17(a.niw.r[l]) << "  lambda " << fmt17(a.good->lambda[l])
                << "  value " << fmt17(a.good->terms[l]) << "\n";
        }
    } else if (a.general) {
        for (std::size_t k = 0; k < a.general->terms.size(); ++k) {
            out << "  anchor " << k << "  value " << fmt17(a.general->terms[k]) << "\n";
        }
    } else if (a.expansion) {
        for (const ExpansionTerm& term : a.expansion->terms) {
            out << "  order " << term.order << "  value " << fmt17(term.value) << "  scaled "
                << fmt17(a.expansion->prefactor * term.value);
            if (!term.factors.empty()) {
                out << "  [";
                for (std::size_t i = 0; i < term.factors.size(); ++i) {
                    const ExpansionFactor& f = term.factors[i];
                    out << (i ? " " : "") << "Y(" << f.cluster << ";" << f.g << ")";
                    if (f.mult > 1) {
                        out << "^" << f.mult;
                    }
                }
                out << "]";
            }
            out << "\n";
        }
    }
    out << "combined_p:         " << fmt17(a.combined_p) << "\n";
    if (a.expansion) {
        out << "truncation bound:   " << fmt17(a.truncation_bound) << "\n";
    }
    out << "cancellation index: " << fmt4(a.diag.cancellation_index) << "\n";
    if (a.mc) {
        out << "mc check:           estimate " << fmt17(a.mc->estimate) << "  stderr "
            << fmt4(a.mc->standard_error) << "  samples " << a.mc->samples << "  seed "
            << a.mc->seed << "\n";
    }
    if (a.hp) {
        out << "hp check:           " << fmt17(a.hp->first) << "  (" << a.hp->second
            << " digits)\n";
    }
    for (const std::string& w : a.warnings) {
        out << "warning:            " << w << "\n";
    }
}

inline std::string write_report(const Analysis& a) {
    JsonWriter j;
    j.begin_object();
    j.key("format_version").value(std::int64_t{1});

    j.key("config").begin_object();
    j.key("requested_method").value(method_name(a.requested));
    j.key("eta").value(a.cfg.eta);
    j.key("order").value(a.cfg.order);
    j.key("seed").value(a.cfg.seed);
    if (a.cfg.mc_check) {
        j.key("mc_check").value(*a.cfg.mc_check);
    }
    if (a.cfg.precision_digits) {
        j.key("precision").value(*a.cfg.precision_digits);
    }
    j.end_object();

    j.key("items").begin_array();
    for (const PValueItem& item : a.input.items) {
        j.begin_object();
        if (item.p) {
            j.key("p").value(*item.p);
        }
        j.key("log_p").value(item.log_p);
        j.key("weight").value(item.weight);
        j.end_object();
    }
    j.end_array();

    j.key("normalized_inverse_weights").begin_array();
    for (std::size_t i = 0; i < a.niw.size(); ++i) {
        j.begin_object();
        j.key("r").value(a.niw.r[i]);
        j.key("source").value(a.niw.source[i]);
        j.end_object();
    }
    j.end_array();

    j.key("t").value(a.t.t);
    if (auto tau = tau_if_representable(a.t)) {
        j.key("tau").value(*tau);
    }

    j.key("clusters").begin_array();
    for (const Cluster& c : a.cs.clusters) {
        j.begin_object();
        j.key("center").value(c.center);
        j.key("multiplicity").value(c.size());
        j.key("spread").value(c.spread);
        j.key("members").begin_array();
        for (std::size_t i = 0; i < c.size(); ++i) {
            j.begin_object();
            j.key("value").value(c.values[i]);
            j.key("deviation").value(c.deviations[i]);
            j.key("source").value(c.source[i]);
            j.end_object();
        }
        j.end_array();
        j.end_object();
    }
    j.end_array();

    j.key("method").value(a.method);
    j.key("eta").value(a.cfg.eta);
    j.key("order").value(a.cfg.order);
    j.key("combined_p").value(a.combined_p);
    if (a.fisher_t) {
        j.key("fisher_t").value(*a.fisher_t);
    }
    if (a.general || a.expansion) {
        j.key("prefactor").value(a.general ? a.general->prefactor : a.expansion->prefactor);
    }

    j.key("terms").begin_array();
    if (a.fisher_t) {
        j.begin_object();
        j.key("value").value(a.combined_p);
        j.end_object();
    } else if (a.good) {
        for (std::size_t l = 0; l < a.good->terms.size(); ++l) {
            j.begin_object();
            j.key("r").value(a.niw.r[l]);
            j.key("source").value(a.niw.source[l]);
            j.key("lambda").value(a.good->lambda[l]);
            j.key("value").value(a.good->terms[l]);
            j.end_object();
        }
    } else if (a.general) {
        for (std::size_t k = 0; k < a.general->terms.size(); ++k) {
            j.begin_object();
            j.key("anchor").value(k);
            j.key("center").value(a.cs.clusters[k].center);
            j.key("multiplicity").value(a.cs.clusters[k].size());
            j.key("value").value(a.general->terms[k]);
            j.end_object();
        }
    } else if (a.expansion) {
        for (const ExpansionTerm& term : a.expansion->terms) {
            j.begin_object();
            j.key("order").value(term.order);
            j.key("factors").begin_array();
            for (const ExpansionFactor& f : term.factors) {
                j.begin_object();
                j.key("cluster").value(f.cluster);
                j.key("g").value(f.g);
                j.key("mult").value(f.mult);
                j.end_object();
            }
            j.end_array();
            j.key("coefficient").value(term.coefficient);
            j.key("ftilde").value(term.ftilde);
            j.key("value").value(term.value);
            j.key("scaled_value").value(a.expansion->prefactor * term.value);
            j.end_object();
        }
    }
    j.end_array();

    j.key("truncation_bound").value(a.truncation_bound);
    j.key("cancellation_index").value(a.diag.cancellation_index);
    j.key("max_abs_term").value(a.diag.max_abs_term);
    j.key("order_insufficient").value(a.order_insufficient);

    j.key("warnings").begin_array();
    for (const std::string& w : a.warnings) {
        j.value(w);
    }
    j.end_array();

    if (a.mc) {
        j.key("mc").begin_object();
        j.key("estimate").value(a.mc->estimate);
        j.key("stderr").value(a.mc->standard_error);
        j.key("samples").value(a.mc->samples);
        j.key("seed").value(a.mc->seed);
        j.end_object();
    }
    if (a.hp) {
        j.key("hp").begin_object();
        j.key("value").value(a.hp->first);
        j.key("digits").value(a.hp->second);
        j.end_object();
    }

    j.end_object();
    return std::move(j).str();
}

// Re-ingest a report, recompute with the recorded configuration, and demand
// a bit-identical combined_p.
inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    nlohmann::json rep;
    try {
        rep = nlohmann::json::parse(detail::read_stream_or_file(cfg.verify_path));
    } catch (const nlohmann::json::exception& e) {
        err << "pcomb: " << cfg.verify_path << ": invalid report: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!rep.contains("items") || !rep["items"].is_array() || rep["items"].empty()) {
            throw InputError(cfg.verify_path + ": report lacks an 'items' array");
        }
        WeightedPValues input;
        for (const auto& item : rep["items"]) {
            if (item.contains("p")) {
                input.push_p(item["p"].get<double>(), item["weight"].get<double>());
            } else {
                input.push_log_p(item["log_p"].get<double>(), item["weight"].get<double>());
            }
        }
        RunConfig rc;
        const auto& c = rep.at("config");
        rc.method = parse_method(c.at("requested_method").get<std::string>());
        rc.eta = c.at("eta").get<double>();
        rc.order = c.at("order").get<int>();
        rc.seed = c.value("seed", std::uint64_t{1});

        const Analysis a = analyze(std::move(input), rc);
        if (!rep.contains("combined_p") || !rep["combined_p"].is_number()) {
            throw InputError(cfg.verify_path + ": report lacks a numeric combined_p");
        }
        const double recorded = rep["combined_p"].get<double>();
        if (recorded == a.combined_p) {
            out << "verify: OK combined_p " << detail::fmt17(a.combined_p)
                << " reproduced bit-for-bit (method " << a.method << ")\n";
            return 0;
        }
        err << "verify: MISMATCH recorded " << detail::fmt17(recorded) << " recomputed "
            << detail::fmt17(a.combined_p) << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "pcomb: " << e.what() << "\n";
        return 2;
    }
}

inline int run(RunConfig cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.verify_path.empty()) {
        return run_verify(cfg, out, err);
    }
    try {
        const std::string text = detail::read_stream_or_file(cfg.input_path);
        WeightedPValues input = cfg.format == RunConfig::Format::csv
                                    ? detail::parse_csv(text, cfg.input_path)
                                    : detail::parse_doc(text, cfg.input_path, cfg);
        const Analysis a = analyze(std::move(input), cfg);
        print_human(a, out);
        if (!a.cfg.out_path.empty()) {
            std::ofstream rep(a.cfg.out_path, std::ios::binary);
            if (!rep) {
                err << "pcomb: " << a.cfg.out_path << ": cannot write report\n";
                return 2;
            }
            rep << write_report(a) << "\n";
        }
        return a.order_insufficient ? 3 : 0;
    } catch (const std::exception& e) {
        err << "pcomb: " << e.what() << "\n";
        return 2;
    }
}

} // namespace pcomb
