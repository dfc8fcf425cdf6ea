#pragma once

// Exact combined P-values.
//
// Fisher's method (equal weights), Good's method (all-distinct weights), and
// the general grouped case where the inverse weights form m clusters with
// multiplicities n_k. The general CDF is
//
//   F = [prod_l r_l^{n_l}] * Ftilde(t; n_1..n_m)
//
// where Ftilde sums, for each anchor cluster k and each composition
// (g_1..g_m) >= 0 with sum g_i = n_k - 1, the term
//
//   [1/r_k^{g_k+1}] H(r_k t, g_k) prod_{j!=k} alpha(g_j; j, k),
//   alpha(g_j; j, k) = C(n_j-1+g_j, g_j) (-1)^{g_j} / (r_j - r_k)^{n_j+g_j}.
//
// Individual terms can dwarf the total when centers crowd together, so every
// term is assembled in log space with its sign tracked separately and the
// reduction is magnitude-ordered and compensated. Diagnostics report how many
// digits the cancellation destroyed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcomb/accumulate.hpp"
#include "pcomb/cluster.hpp"
#include "pcomb/compositions.hpp"
#include "pcomb/erlang.hpp"
#include "pcomb/normalize.hpp"
#include "pcomb/types.hpp"

namespace pcomb {

struct Diagnostics {
    double max_abs_term = 0.0;
    // log10(max |term| / max(|result|, tiny)): decimal digits lost to
    // cancellation. Above 8, half of double precision is gone.
    double cancellation_index = 0.0;
    bool cancellation_warning = false;
};

inline constexpr double cancellation_warning_threshold = 8.0;

namespace detail {

inline Diagnostics make_diagnostics(double max_abs_term, double result) {
    Diagnostics d;
    d.max_abs_term = max_abs_term;
    if (max_abs_term > 0.0) {
        const double floor = std::max(std::abs(result), std::numeric_limits<double>::min());
        d.cancellation_index = std::log10(max_abs_term / floor);
    }
    d.cancellation_warning = d.cancellation_index > cancellation_warning_threshold;
    return d;
}

inline double log_choose(int n, int k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0)
           - std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Ftilde evaluated term by term. anchor_totals partitions the same
// magnitude-ordered reduction by anchor cluster, for reporting.
struct FtildeValue {
    double total = 0.0;
    std::vector<double> anchor_totals;
    double max_abs_term = 0.0;
};

inline FtildeValue ftilde(std::span<const double> r, std::span<const int> n, double t) {
    const std::size_t m = r.size();
    if (m == 0 || n.size() != m) {
        throw std::invalid_argument("ftilde: centers and multiplicities must match and be non-empty");
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (n[k] < 1) {
            throw std::invalid_argument("ftilde: every multiplicity must be at least 1");
        }
        if (k + 1 < m && !(r[k] < r[k + 1])) {
            throw std::invalid_argument("ftilde: centers must be strictly ascending");
        }
    }

    std::vector<double> terms;
    std::vector<std::size_t> anchor_of;
    for (std::size_t k = 0; k < m; ++k) {
        for_each_composition(static_cast<int>(m), n[k] - 1, [&](const std::vector<int>& g) {
            double lm = -(g[k] + 1) * std::log(r[k]) + log_h_function(r[k] * t, g[k]);
            bool negative = false;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == k) {
                    continue;
                }
                const int gj = g[j];
                lm += log_choose(n[j] - 1 + gj, gj);
                const double d = r[j] - r[k];
                lm -= (n[j] + gj) * std::log(std::abs(d));
                if (d < 0.0 && ((n[j] + gj) & 1)) {
                    negative = !negative;
                }
                if (gj & 1) {
                    negative = !negative;
                }
            }
            const double mag = std::exp(lm);
            terms.push_back(negative ? -mag : mag);
            anchor_of.push_back(k);
        });
    }

    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(terms[a]) < std::abs(terms[b]);
    });

    FtildeValue out;
    NeumaierSum total;
    std::vector<NeumaierSum> per_anchor(m);
    for (std::size_t i : order) {
        total.add(terms[i]);
        per_anchor[anchor_of[i]].add(terms[i]);
        out.max_abs_term = std::max(out.max_abs_term, std::abs(terms[i]));
    }
    out.total = total.value();
    out.anchor_totals.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.anchor_totals.push_back(per_anchor[k].value());
    }
    return out;
}

} // namespace detail

// Fisher's equal-weight combination: H(t, L-1) with t = sum of -ln p_i,
// which is tau_F * sum_{l<L} [ln(1/tau_F)]^l / l!.
inline double fisher_combine(LogTau t, int L) {
    if (L < 1) {
        throw std::invalid_argument("fisher_combine: L must be at least 1");
    }
    if (std::isnan(t.t) || t.t < 0.0) {
        throw std::invalid_argument("fisher_combine: t must be non-negative");
    }
    return h_function(t.t, L - 1);
}

// Good's weighted combination via partial fractions. lambda[l] and terms[l]
// follow the ascending-r order of the input; terms sum to the probability.
struct GoodResult {
    double probability = 0.0;
    std::vector<double> lambda; // Lambda_l = prod_{k!=l} r_k / (r_k - r_l)
    std::vector<double> terms;  // Lambda_l * e^{-r_l t}
    Diagnostics diag;
};

inline GoodResult good_combine(const NormalizedInverseWeights& r, LogTau t) {
    const std::size_t m = r.size();
    if (m == 0) {
        throw std::invalid_argument("good_combine: empty weight list");
    }
    if (std::isnan(t.t) || t.t < 0.0) {
        throw std::invalid_argument("good_combine: t must be non-negative");
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (r.r[i] == r.r[i + 1]) {
            throw std::domain_error("degenerate weights: use general_combine or expansion_combine");
        }
    }

    GoodResult out;
    out.lambda.reserve(m);
    out.terms.reserve(m);
    for (std::size_t l = 0; l < m; ++l) {
        double lm = 0.0;
        bool negative = false;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == l) {
                continue;
            }
            lm += std::log(r.r[k]) - std::log(std::abs(r.r[k] - r.r[l]));
            if (r.r[k] < r.r[l]) {
                negative = !negative;
            }
        }
        const double lam = negative ? -std::exp(lm) : std::exp(lm);
        const double term = negative ? -std::exp(lm - r.r[l] * t.t) : std::exp(lm - r.r[l] * t.t);
        out.lambda.push_back(lam);
        out.terms.push_back(term);
    }
    out.probability = sum_by_magnitude(out.terms);
    double max_abs = 0.0;
    for (double v : out.terms) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    out.diag = detail::make_diagnostics(max_abs, out.probability);
    return out;
}

// Product of the original inverse weights (the exact member values, not
// center powers), in cluster-major member order. This is the overall factor
// multiplying Ftilde, and using the same loop everywhere keeps the exact and
// expanded paths bit-identical where they must agree.
inline double pvalue_prefactor(const ClusterSet& cs) {
    double prod = 1.0;
    for (const Cluster& c : cs.clusters) {
        for (double v : c.values) {
            prod *= v;
        }
    }
    return prod;
}

// General grouped case with exact per-group weights (all deviations zero).
//
// terms[k] is anchor k's composition block scaled by the running factor
// prod_{j<=k} r_j^{n_j}: the conventional display, in which only the final
// block carries the full prefactor. The list is diagnostic and does not add
// up to the probability unless m = 1; the probability itself is
// prefactor * Ftilde in full.
struct GeneralResult {
    double probability = 0.0;
    double prefactor = 1.0;
    std::vector<double> terms;
    Diagnostics diag;
};

inline GeneralResult general_combine(const ClusterSet& cs, LogTau t) {
    if (cs.count() == 0) {
        throw std::invalid_argument("general_combine: empty cluster set");
    }
    if (!cs.zero_deviation()) {
        throw std::invalid_argument("nonzero deviations: use expansion_combine");
    }
    if (std::isnan(t.t) || t.t < 0.0) {
        throw std::invalid_argument("general_combine: t must be non-negative");
    }

    const std::size_t m = cs.count();
    std::vector<double> centers;
    std::vector<int> mult;
    centers.reserve(m);
    mult.reserve(m);
    for (const Cluster& c : cs.clusters) {
        centers.push_back(c.center);
        mult.push_back(static_cast<int>(c.size()));
    }

    const detail::FtildeValue ft = detail::ftilde(centers, mult, t.t);
    GeneralResult out;
    out.prefactor = pvalue_prefactor(cs);
    out.probability = out.prefactor * ft.total;
    out.terms.reserve(m);
    double running = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        for (double v : cs.clusters[k].values) {
            running *= v;
        }
        out.terms.push_back(running * ft.anchor_totals[k]);
    }
    out.diag = detail::make_diagnostics(out.prefactor * ft.max_abs_term, out.probability);
    return out;
}

} // namespace pcomb
