#pragma once

// Independent verification of the analytic combiners.
//
// mc_estimate simulates the defining probability directly: draw uniform
// P-values, form the weighted statistic, count threshold crossings. The
// sample stream is carved into fixed blocks, each seeded by mixing (seed,
// block index), so the estimate is bit-identical for any worker count.
//
// hp_evaluate re-runs the exact formulas in software arbitrary-precision
// arithmetic (MPFR via Boost.Multiprecision). Holding enough digits defeats
// the cancellation that breaks the double-precision path, which makes this
// the ground truth the expansion is tested against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <random>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "pcomb/cluster.hpp"
#include "pcomb/compositions.hpp"
#include "pcomb/normalize.hpp"
#include "pcomb/types.hpp"

namespace pcomb {

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// splitmix64 finalizer: one well-mixed 64-bit value per (seed, counter)
// pair, used to seed the per-block engines of the splittable stream.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mc_block_size = 65536;

} // namespace detail

// Estimate Prob(T >= t) for T = sum_j (1/r_j)(-ln x_j) with i.i.d. uniform
// (0,1] draws x_j and the same normalized inverse weights the formulas use.
// Only the weights of `input` matter. Deterministic for a fixed seed and
// sample count, regardless of `threads`.
inline MonteCarloEstimate mc_estimate(const WeightedPValues& input, LogTau t_threshold,
                                      std::uint64_t samples, std::uint64_t seed,
                                      unsigned threads = 1) {
    if (samples < 1000) {
        throw std::invalid_argument("mc_estimate: need at least 1000 samples");
    }
    if (std::isnan(t_threshold.t)) {
        throw std::invalid_argument("mc_estimate: threshold must be a number");
    }
    const NormalizedInverseWeights niw = normalize_inverse_weights(input);
    std::vector<double> inv_r;
    inv_r.reserve(niw.size());
    for (double r : niw.r) {
        inv_r.push_back(1.0 / r);
    }

    const std::uint64_t nblocks = (samples + detail::mc_block_size - 1) / detail::mc_block_size;
    auto count_blocks = [&](std::uint64_t first, std::uint64_t last) -> std::uint64_t {
        std::uint64_t hits = 0;
        for (std::uint64_t b = first; b < last; ++b) {
            std::mt19937_64 engine(detail::mix64(seed ^ detail::mix64(b)));
            const std::uint64_t begin = b * detail::mc_block_size;
            const std::uint64_t count = std::min<std::uint64_t>(detail::mc_block_size, samples - begin);
            for (std::uint64_t i = 0; i < count; ++i) {
                double statistic = 0.0;
                for (double w : inv_r) {
                    // (engine() >> 11) + 1 spans 1..2^53, so u lies in (0, 1]
                    const double u = static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
                    statistic += w * (-std::log(u));
                }
                if (statistic >= t_threshold.t) {
                    ++hits;
                }
            }
        }
        return hits;
    };

    std::uint64_t hits = 0;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::uint64_t workers = std::min<std::uint64_t>(threads, nblocks);
    if (workers <= 1) {
        hits = count_blocks(0, nblocks);
    } else {
        std::vector<std::uint64_t> partial(workers, 0);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t first = nblocks * w / workers;
            const std::uint64_t last = nblocks * (w + 1) / workers;
            pool.emplace_back([&, w, first, last] { partial[w] = count_blocks(first, last); });
        }
        for (std::thread& th : pool) {
            th.join();
        }
        for (std::uint64_t h : partial) {
            hits += h;
        }
    }

    MonteCarloEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

namespace detail {

using mpreal = boost::multiprecision::mpfr_float;

// Scoped decimal working precision for the thread-local MPFR default.
class PrecisionGuard {
public:
    explicit PrecisionGuard(int digits) : saved_(mpreal::default_precision()) {
        mpreal::default_precision(static_cast<unsigned>(digits));
    }
    ~PrecisionGuard() { mpreal::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

// Good's partial-fraction sum, straight form: the arithmetic cancels just as
// catastrophically as in double, but the working precision absorbs it.
template <typename Real>
Real hp_good_eval(std::span<const double> r, double t) {
    const std::size_t m = r.size();
    Real total = 0;
    for (std::size_t l = 0; l < m; ++l) {
        Real lam = 1;
        for (std::size_t k = 0; k < m; ++k) {
            if (k != l) {
                lam *= Real(r[k]) / (Real(r[k]) - Real(r[l]));
            }
        }
        total += lam * exp(-Real(r[l]) * Real(t));
    }
    return total;
}

template <typename Real>
Real hp_h(const Real& x, int n) {
    Real sum = 1;
    Real term = 1;
    for (int k = 1; k <= n; ++k) {
        term *= x / k;
        sum += term;
    }
    return exp(-x) * sum;
}

// The grouped composition sum, prefactor included.
template <typename Real>
Real hp_general_eval(std::span<const double> centers, std::span<const int> mult, double t) {
    const std::size_t m = centers.size();
    Real total = 0;
    for (std::size_t k = 0; k < m; ++k) {
        for_each_composition(static_cast<int>(m), mult[k] - 1, [&](const std::vector<int>& g) {
            Real v = pow(Real(centers[k]), -(g[k] + 1)) * hp_h(Real(centers[k]) * Real(t), g[k]);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == k) {
                    continue;
                }
                Real binom = 1;
                for (int i = 1; i <= g[j]; ++i) {
                    binom *= Real(mult[j] - 1 + i) / Real(i);
                }
                v *= binom;
                if (g[j] & 1) {
                    v = -v;
                }
                v /= pow(Real(centers[j]) - Real(centers[k]), mult[j] + g[j]);
            }
            total += v;
        });
    }
    Real prefactor = 1;
    for (std::size_t k = 0; k < m; ++k) {
        for (int i = 0; i < mult[k]; ++i) {
            prefactor *= Real(centers[k]);
        }
    }
    return prefactor * total;
}

inline void check_hp_digits(int digits) {
    if (digits < 30) {
        throw std::invalid_argument("hp_evaluate: need at least 30 decimal digits");
    }
}

} // namespace detail

// Good's formula at `digits` decimal digits of working precision.
inline double hp_evaluate(const NormalizedInverseWeights& r, LogTau t, int digits) {
    detail::check_hp_digits(digits);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (r.r[i] == r.r[i + 1]) {
            throw std::domain_error("degenerate weights: use general_combine or expansion_combine");
        }
    }
    detail::PrecisionGuard guard(digits);
    return detail::hp_good_eval<detail::mpreal>(r.r, t.t).convert_to<double>();
}

// The grouped formula at `digits` decimal digits; requires exact groups.
inline double hp_evaluate(const ClusterSet& cs, LogTau t, int digits) {
    detail::check_hp_digits(digits);
    if (!cs.zero_deviation()) {
        throw std::invalid_argument("nonzero deviations: evaluate the member weights directly instead");
    }
    std::vector<double> centers;
    std::vector<int> mult;
    centers.reserve(cs.count());
    mult.reserve(cs.count());
    for (const Cluster& c : cs.clusters) {
        centers.push_back(c.center);
        mult.push_back(static_cast<int>(c.size()));
    }
    detail::PrecisionGuard guard(digits);
    return detail::hp_general_eval<detail::mpreal>(centers, mult, t.t).convert_to<double>();
}

} // namespace pcomb
