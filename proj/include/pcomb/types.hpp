#pragma once

// Input container for the combined-significance problem: P-values with
// positive weights. P-values are held as ln p internally so that inputs far
// below the double-precision underflow threshold remain first-class.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcomb {

namespace detail {

inline std::string item_label(std::size_t index) {
    return "item " + std::to_string(index);
}

} // namespace detail

struct PValueItem {
    double log_p = 0.0;      // ln p, <= 0; -inf enters only via push_log_p
    double weight = 1.0;     // w > 0
    std::optional<double> p; // original p when the caller supplied one
};

// Non-empty list of (p, w) pairs. Use push_p / push_log_p (or the from_*
// builders) so every entry is validated with its index on the way in.
struct WeightedPValues {
    std::vector<PValueItem> items;

    std::size_t size() const { return items.size(); }

    void push_p(double p, double w) {
        const std::size_t i = items.size() + 1;
        if (std::isnan(p) || !(p > 0.0) || p > 1.0) {
            throw std::invalid_argument(detail::item_label(i) + ": p must be in (0, 1]");
        }
        check_weight(w, i);
        items.push_back(PValueItem{std::log(p), w, p});
    }

    // A -inf log_p (an exact zero P-value) is accepted here so the precise
    // complaint can come from compute_t, where the consequence is visible.
    void push_log_p(double log_p, double w) {
        const std::size_t i = items.size() + 1;
        if (std::isnan(log_p) || log_p > 0.0) {
            throw std::invalid_argument(detail::item_label(i) + ": log_p must be <= 0");
        }
        check_weight(w, i);
        items.push_back(PValueItem{log_p, w, std::nullopt});
    }

    static WeightedPValues from_p(std::span<const double> p, std::span<const double> w) {
        check_lengths(p.size(), w.size());
        WeightedPValues out;
        out.items.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            out.push_p(p[i], w[i]);
        }
        return out;
    }

    static WeightedPValues from_log_p(std::span<const double> log_p, std::span<const double> w) {
        check_lengths(log_p.size(), w.size());
        WeightedPValues out;
        out.items.reserve(log_p.size());
        for (std::size_t i = 0; i < log_p.size(); ++i) {
            out.push_log_p(log_p[i], w[i]);
        }
        return out;
    }

private:
    static void check_weight(double w, std::size_t i) {
        if (std::isnan(w) || !(w > 0.0) || std::isinf(w)) {
            throw std::invalid_argument(detail::item_label(i) + ": weight must be positive and finite");
        }
    }

    static void check_lengths(std::size_t np, std::size_t nw) {
        if (np != nw) {
            throw std::invalid_argument("p and weight lists must have equal length");
        }
        if (np == 0) {
            throw std::invalid_argument("input must contain at least one item");
        }
    }
};

// The statistic t = -ln(tau). Everything downstream works with t; tau itself
// is materialized only on request and only when it does not underflow.
struct LogTau {
    double t = 0.0;
};

inline std::optional<double> tau_if_representable(LogTau t) {
    if (t.t < 700.0) {
        return std::exp(-t.t);
    }
    return std::nullopt;
}

} // namespace pcomb
