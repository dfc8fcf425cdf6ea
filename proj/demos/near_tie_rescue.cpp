// Shows why the deviation expansion exists. When inverse weights nearly tie,
// the partial-fraction closed form subtracts huge almost-equal terms and
// returns noise; the expansion around the cluster center keeps full
// precision and reports a rigorous truncation bound.

#include <cmath>
#include <cstdio>

#include "pcomb/pcomb.hpp"

int main() {
    // Weights that agree to five decimal places, as happens when they come
    // from a shared calibration with tiny per-channel corrections.
    const std::vector<double> p = {0.008000257, 0.008579261, 0.0008911761, 0.006967988,
                                   0.004973110};
    const std::vector<double> w = {0.54531152, 0.54532057, 0.54531221, 0.54531399, 0.54531776};
    const auto input = pcomb::WeightedPValues::from_p(p, w);
    const auto niw = pcomb::normalize_inverse_weights(input);
    const auto t = pcomb::compute_t(input, niw);

    // The closed form is mathematically exact and numerically useless here:
    // the cancellation index counts the decimal digits lost.
    const auto good = pcomb::good_combine(niw, t);
    std::printf("closed form:        %.17g\n", good.probability);
    std::printf("cancellation index: %.1f of ~16 digits available\n",
                good.diag.cancellation_index);

    // One cluster of five, deviations of order 1e-5. Fourth order is already
    // far below the leading term.
    const auto cs = pcomb::cluster(niw, 0.001);
    const auto ex = pcomb::expansion_combine(cs, t, 4);
    std::printf("expansion:          %.17g\n", ex.combined_p);
    std::printf("truncation bound:   %.3g (next two orders)\n", ex.truncation_bound);

    // A 60-digit evaluation of the same closed form confirms the expansion.
    const double hp = pcomb::hp_evaluate(niw, t, 60);
    std::printf("60-digit check:     %.17g\n", hp);
    std::printf("expansion error:    %.3g relative\n",
                std::fabs(ex.combined_p - hp) / hp);
    return 0;
}
