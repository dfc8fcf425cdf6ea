#pragma once

// Numerically stable combined P-values for nearly degenerate weights.
//
// Instead of feeding crowded inverse weights to the exact partial-fraction
// formula (whose terms cancel catastrophically), the weights are clustered
// and the CDF is expanded in the small deviations eta_{k;j} from the cluster
// centers. Writing Y_{k;g} = sum_j (-eta_{k;j})^g / g, the combined P-value
// becomes
//
//   P = [prod_{l,j} (r_l + eta_{l;j})]
//       * sum over multisets of factors (k, g>=2) of
//         [prod Y_{k;g}^{mult} / mult!] * Ftilde(t; n + shifts)
//
// where a factor (k, g) with multiplicity mult raises cluster k's
// multiplicity argument by g*mult. Every Ftilde argument keeps the
// well-separated centers, so each term is evaluated stably; the deviations
// enter only through the tiny moments Y. Truncation error is bounded by
// actually computing the next two orders.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcomb/accumulate.hpp"
#include "pcomb/cluster.hpp"
#include "pcomb/exact.hpp"
#include "pcomb/types.hpp"

namespace pcomb {

inline constexpr int max_supported_order = 8;

struct ExpansionFactor {
    std::size_t cluster = 0;
    int g = 2;
    int mult = 1;
};

struct ExpansionTerm {
    int order = 0;                        // sum of g * mult over factors
    std::vector<ExpansionFactor> factors; // ascending (cluster, g); empty at order 0
    double coefficient = 1.0;             // prod Y_{k;g}^{mult} / mult!
    std::vector<int> shifted;             // multiplicity vector n' passed to Ftilde
    double ftilde = 0.0;                  // Ftilde(t; n'), 0 when skipped (zero coefficient)
    double value = 0.0;                   // coefficient * ftilde
};

struct CombinedResult {
    double combined_p = 0.0;
    std::string method = "expansion";
    std::vector<ExpansionTerm> terms;     // ascending order
    double prefactor = 1.0;               // prod of the exact inverse weights
    double truncation_bound = 0.0;        // computed orders max_order+1..+2, prefactor included
    Diagnostics diag;
    bool order_insufficient = false;
    int max_order = 0;
};

namespace detail {

inline double factorial_small(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

} // namespace detail

// Enumerate every multiset of (cluster, moment-order) factors whose total
// order stays within max_order, as term skeletons: coefficients and shifted
// multiplicities filled in, Ftilde values left for the evaluator. Terms come
// out sorted by order; within an order the enumeration sequence is fixed, so
// the output is deterministic.
inline std::vector<ExpansionTerm> generate_terms(const ClusterSet& cs, const MomentTable& given,
                                                 int max_order) {
    if (max_order < 0) {
        throw std::invalid_argument("expansion order must be non-negative");
    }
    // A table shallower than the requested order is extended in place of the
    // caller rather than rejected; the deviations carry all the information.
    MomentTable extended;
    const bool shallow = max_order >= 2 && given.g_max < max_order;
    if (shallow) {
        extended = moments(cs, max_order);
    }
    const MomentTable& y = shallow ? extended : given;
    const std::size_t m = cs.count();

    struct FactorSlot {
        std::size_t k;
        int g;
    };
    std::vector<FactorSlot> slots;
    for (std::size_t k = 0; k < m; ++k) {
        for (int g = 2; g <= max_order; ++g) {
            slots.push_back(FactorSlot{k, g});
        }
    }

    std::vector<int> base;
    base.reserve(m);
    for (const Cluster& c : cs.clusters) {
        base.push_back(static_cast<int>(c.size()));
    }

    std::vector<ExpansionTerm> out;
    std::vector<ExpansionFactor> current;
    auto emit = [&]() {
        ExpansionTerm term;
        term.factors = current;
        term.shifted = base;
        for (const ExpansionFactor& f : current) {
            term.order += f.g * f.mult;
            term.coefficient *= detail::int_pow(y(f.cluster, f.g), f.mult)
                                / detail::factorial_small(f.mult);
            term.shifted[f.cluster] += f.g * f.mult;
        }
        out.push_back(std::move(term));
    };
    std::function<void(std::size_t, int)> descend = [&](std::size_t i, int budget) {
        if (i == slots.size() || budget < 2) {
            emit();
            return;
        }
        descend(i + 1, budget); // multiplicity 0 for this slot
        for (int mult = 1; slots[i].g * mult <= budget; ++mult) {
            current.push_back(ExpansionFactor{slots[i].k, slots[i].g, mult});
            descend(i + 1, budget - slots[i].g * mult);
            current.pop_back();
        }
    };
    descend(0, max_order);

    std::stable_sort(out.begin(), out.end(),
                     [](const ExpansionTerm& a, const ExpansionTerm& b) { return a.order < b.order; });
    return out;
}

inline CombinedResult expansion_combine(const ClusterSet& cs, LogTau t, int max_order) {
    if (max_order < 0 || max_order > max_supported_order) {
        throw std::invalid_argument("expansion order must be between 0 and "
                                    + std::to_string(max_supported_order));
    }
    if (cs.count() == 0) {
        throw std::invalid_argument("expansion_combine: empty cluster set");
    }
    if (std::isnan(t.t) || t.t < 0.0) {
        throw std::invalid_argument("expansion_combine: t must be non-negative");
    }

    const std::size_t m = cs.count();
    std::vector<double> centers;
    centers.reserve(m);
    for (const Cluster& c : cs.clusters) {
        centers.push_back(c.center);
    }

    // Two extra orders feed the truncation bound; the moment table is built
    // to match, so callers never have to size it themselves.
    const int full_order = max_order + 2;
    const MomentTable y = moments(cs, std::max(2, full_order));
    std::vector<ExpansionTerm> skeletons = generate_terms(cs, y, full_order);

    std::map<std::vector<int>, detail::FtildeValue> cache;
    auto evaluate = [&](const std::vector<int>& shifted) -> const detail::FtildeValue& {
        auto it = cache.find(shifted);
        if (it == cache.end()) {
            it = cache.emplace(shifted, detail::ftilde(centers, shifted, t.t)).first;
        }
        return it->second;
    };

    CombinedResult result;
    result.max_order = max_order;
    result.prefactor = pvalue_prefactor(cs);

    NeumaierSum bound;
    double max_inner_scale = 0.0;
    for (ExpansionTerm& term : skeletons) {
        if (term.order > max_order) {
            // Bound contribution. Ftilde is positive in exact arithmetic;
            // the absolute values guard against a cancelled rounding of it.
            if (term.coefficient != 0.0) {
                bound.add(std::abs(term.coefficient) * std::abs(evaluate(term.shifted).total));
            }
            continue;
        }
        if (term.coefficient != 0.0) {
            const detail::FtildeValue& ft = evaluate(term.shifted);
            term.ftilde = ft.total;
            term.value = term.coefficient * ft.total;
            max_inner_scale = std::max(max_inner_scale,
                                       std::abs(term.coefficient) * ft.max_abs_term);
        }
        result.terms.push_back(std::move(term));
    }

    std::vector<double> values;
    values.reserve(result.terms.size());
    for (const ExpansionTerm& term : result.terms) {
        values.push_back(term.value);
    }
    const double series = sum_by_magnitude(values);
    result.combined_p = result.prefactor * series;
    result.truncation_bound = result.prefactor * bound.value();
    result.diag = detail::make_diagnostics(result.prefactor * max_inner_scale, result.combined_p);
    result.order_insufficient = result.truncation_bound > std::abs(result.combined_p);
    return result;
}

// Two P-values whose weight ratio is w1/w2 = 1 + epsilon: Good's closed form
// against Fisher's p1 p2 (1 - ln(p1 p2)). The difference shrinks linearly
// with epsilon, which is the continuity check between the two methods.
struct GoodFisherComparison {
    double good_value = 0.0;
    double fisher_value = 0.0;
    double difference = 0.0;
};

inline GoodFisherComparison good_to_fisher_limit_check(double p1, double p2, double epsilon) {
    if (!(p1 > 0.0) || p1 > 1.0 || !(p2 > 0.0) || p2 > 1.0) {
        throw std::invalid_argument("good_to_fisher_limit_check: p values must be in (0, 1]");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("good_to_fisher_limit_check: epsilon must be positive");
    }
    GoodFisherComparison out;
    out.good_value = ((1.0 + epsilon) * p1 * std::pow(p2, 1.0 / (1.0 + epsilon))
                      - std::pow(p1, 1.0 + epsilon) * p2)
                     / epsilon;
    out.fisher_value = p1 * p2 * (1.0 - std::log(p1 * p2));
    out.difference = out.good_value - out.fisher_value;
    return out;
}

} // namespace pcomb
