#pragma once

// Inverse-weight normalization and the log-space statistic.
//
// Only ratios of the weights matter for the combined P-value, so the inverse
// weights r_j = 1/w_j are rescaled once to sum to the item count M. That
// fixes the scale for every later formula and makes results invariant under
// global rescaling of the input weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcomb/accumulate.hpp"
#include "pcomb/types.hpp"

namespace pcomb {

// Normalized inverse weights, sorted ascending. source[i] is the index of
// the input item that r[i] belongs to, so permuting the input only permutes
// the back-references.
struct NormalizedInverseWeights {
    std::vector<double> r;
    std::vector<std::size_t> source;

    std::size_t size() const { return r.size(); }

    // Rescale a raw inverse-weight list by M / sum and sort. When the raw
    // values already sum to M the scale factor is exactly 1 and every bit of
    // the input survives.
    static NormalizedInverseWeights from_raw(std::span<const double> raw) {
        if (raw.empty()) {
            throw std::invalid_argument("input must contain at least one item");
        }
        NeumaierSum total;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (std::isnan(raw[i]) || !(raw[i] > 0.0) || std::isinf(raw[i])) {
                throw std::invalid_argument(detail::item_label(i)
                                            + ": inverse weight must be positive and finite");
            }
            total.add(raw[i]);
        }
        const double scale = static_cast<double>(raw.size()) / total.value();

        NormalizedInverseWeights out;
        out.source.resize(raw.size());
        std::iota(out.source.begin(), out.source.end(), std::size_t{0});
        std::stable_sort(out.source.begin(), out.source.end(), [&](std::size_t a, std::size_t b) {
            return raw[a] < raw[b];
        });
        out.r.reserve(raw.size());
        for (std::size_t idx : out.source) {
            out.r.push_back(raw[idx] * scale);
        }
        return out;
    }
};

inline NormalizedInverseWeights normalize_inverse_weights(const WeightedPValues& input) {
    std::vector<double> raw;
    raw.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double w = input.items[i].weight;
        if (std::isnan(w) || !(w > 0.0)) {
            throw std::invalid_argument(detail::item_label(i) + ": weight must be positive and finite");
        }
        raw.push_back(1.0 / w);
    }
    return NormalizedInverseWeights::from_raw(raw);
}

// t = sum_j (1/r_j) * (-ln p_j) with the normalized inverse weights.
// Accumulation runs in ascending-r order with compensation, so the result is
// independent of the input arrangement up to ties.
inline LogTau compute_t(const WeightedPValues& input, const NormalizedInverseWeights& r) {
    if (r.size() != input.size()) {
        throw std::invalid_argument("normalized inverse weights do not match the input items");
    }
    NeumaierSum t;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double log_p = input.items[r.source[i]].log_p;
        if (std::isinf(log_p)) {
            throw std::domain_error("combined P-value is 0; supply log_p finite");
        }
        t.add((-log_p) / r.r[i]);
    }
    return LogTau{t.value()};
}

} // namespace pcomb
