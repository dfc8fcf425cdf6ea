// Exact combining formulas: Fisher's equal-weight tail, Good's distinct
// inverse-weight sum, and the grouped closed form evaluated anchor by
// anchor. Reference values were produced with 60-digit arithmetic from the
// same inputs.

#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "pcomb/cluster.hpp"
#include "pcomb/exact.hpp"
#include "pcomb/normalize.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

pcomb::NormalizedInverseWeights make_niw(std::vector<double> r) {
    pcomb::NormalizedInverseWeights out;
    out.r = std::move(r);
    out.source.resize(out.r.size());
    for (std::size_t i = 0; i < out.source.size(); ++i) {
        out.source[i] = i;
    }
    return out;
}

const std::vector<double> example_r = {0.6, 0.65, 1.2, 1.25, 1.3};
const double example_t = 29.273156305468126; // -ln(1.935663e-13)

} // namespace

TEST_CASE("fisher tail matches frozen values") {
    // Two P-values of 0.05: tau = 0.0025, prob = tau (1 - ln tau).
    CHECK_THAT(pcomb::fisher_combine(pcomb::LogTau{std::log(400.0)}, 2),
               WithinRel(0.017478661367769955, 1e-15));
    CHECK_THAT(pcomb::fisher_combine(pcomb::LogTau{std::log(4.0)}, 2),
               WithinRel(0.59657359027997265, 1e-15));
    CHECK(pcomb::fisher_combine(pcomb::LogTau{0.0}, 7) == 1.0);
    CHECK_THROWS_AS(pcomb::fisher_combine(pcomb::LogTau{1.0}, 0), std::invalid_argument);
}

TEST_CASE("good matches the two-value closed form") {
    const std::vector<double> raw = {0.5, 1.0}; // inverse weights for w = 2, 1
    const auto niw = pcomb::NormalizedInverseWeights::from_raw(raw);
    const auto res = pcomb::good_combine(niw, pcomb::LogTau{4.6609560738166438});
    CHECK_THAT(res.probability, WithinRel(0.087442719099991588, 1e-13));
    REQUIRE(res.lambda.size() == 2);
    // Lambda for r = (2/3, 4/3): 2 and -1, summing to one.
    CHECK_THAT(res.lambda[0], WithinRel(2.0, 1e-13));
    CHECK_THAT(res.lambda[1], WithinRel(-1.0, 1e-13));
}

TEST_CASE("good reproduces the five-term breakdown") {
    const auto niw = make_niw(example_r);
    const auto res = pcomb::good_combine(niw, pcomb::LogTau{example_t});
    CHECK_THAT(res.probability, WithinRel(1.5927202831936289e-6, 1e-12));

    const double terms[] = {2.1873242398353694e-6, -5.9460409728727685e-7,
                            2.1312270834399768e-13, -8.0116464434276354e-14,
                            7.6392924881801615e-15};
    REQUIRE(res.terms.size() == 5);
    for (std::size_t l = 0; l < 5; ++l) {
        CHECK_THAT(res.terms[l], WithinRel(terms[l], 1e-12));
    }

    // Mild alternation: under one decimal digit lost.
    CHECK(res.diag.cancellation_index < 1.0);
    CHECK_FALSE(res.diag.cancellation_warning);
}

TEST_CASE("good rejects tied inverse weights") {
    CHECK_THROWS_WITH(pcomb::good_combine(make_niw({0.8, 0.8, 1.4}), pcomb::LogTau{2.0}),
                      "degenerate weights: use general_combine or expansion_combine");
}

TEST_CASE("good flags catastrophic cancellation on near-ties") {
    // Five nearly identical weights: the lambdas blow up to ~1e15 while the
    // result stays below 1e-4, wiping out most of the mantissa.
    const std::vector<double> w = {0.54531152, 0.54532057, 0.54531221, 0.54531399, 0.54531776};
    const std::vector<double> p = {0.008000257, 0.008579261, 0.0008911761, 0.006967988,
                                   0.004973110};
    const auto in = pcomb::WeightedPValues::from_p(p, w);
    const auto niw = pcomb::normalize_inverse_weights(in);
    const auto t = pcomb::compute_t(in, niw);
    const auto res = pcomb::good_combine(niw, t);
    CHECK(res.diag.cancellation_index > 12.0);
    CHECK(res.diag.cancellation_warning);
    CHECK(std::fabs(res.probability) < 1e-4);
}

TEST_CASE("general equals good on all-singleton clusters") {
    const auto niw = make_niw(example_r);
    const auto cs = pcomb::cluster(niw, 0.0);
    REQUIRE(cs.count() == 5);
    const auto res = pcomb::general_combine(cs, pcomb::LogTau{example_t});
    CHECK_THAT(res.probability, WithinRel(1.5927202831936289e-6, 1e-12));

    // Anchor terms under the cumulative-prefactor display convention.
    const double disp[] = {1.7256995975032500e-6, -3.0492517809603941e-7,
                           1.3115243590399857e-13, -6.1628049564827964e-14,
                           7.6392924881801615e-15};
    REQUIRE(res.terms.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK_THAT(res.terms[k], WithinRel(disp[k], 1e-12));
    }
}

TEST_CASE("general handles true multiplicities") {
    // Two groups of tied inverse weights; reference value from 60-digit
    // evaluation of the grouped closed form.
    const auto cs = pcomb::cluster(make_niw({0.99, 0.992, 1.018, 2.0}), 0.0);
    REQUIRE(cs.count() == 4);
    const auto res = pcomb::general_combine(cs, pcomb::LogTau{8.0});
    CHECK_THAT(res.probability, WithinRel(0.022168052227859411, 1e-11));
}

TEST_CASE("general rejects spread clusters") {
    const auto cs = pcomb::cluster(make_niw({1.0, 1.01, 2.0}), 0.05);
    REQUIRE_FALSE(cs.zero_deviation());
    CHECK_THROWS_WITH(pcomb::general_combine(cs, pcomb::LogTau{3.0}),
                      "nonzero deviations: use expansion_combine");
}

TEST_CASE("general collapses to fisher for one cluster") {
    std::mt19937 gen(625);
    std::uniform_real_distribution<double> vr(0.2, 3.0);
    std::uniform_real_distribution<double> tr(0.1, 25.0);
    for (int rep = 0; rep < 100; ++rep) {
        const int M = 1 + static_cast<int>(gen() % 9);
        const double v = vr(gen);
        const double t = tr(gen);
        const auto cs = pcomb::cluster(make_niw(std::vector<double>(M, v)), 0.0);
        REQUIRE(cs.count() == 1);
        const auto res = pcomb::general_combine(cs, pcomb::LogTau{t});
        const double fisher = pcomb::fisher_combine(pcomb::LogTau{v * t}, M);
        CHECK_THAT(res.probability, WithinRel(fisher, 1e-12));
    }
}

TEST_CASE("good and general agree on separated singletons") {
    std::mt19937 gen(8181);
    std::uniform_real_distribution<double> gap(0.15, 0.8);
    std::uniform_real_distribution<double> start(0.2, 0.8);
    std::uniform_real_distribution<double> tr(0.2, 10.0);
    for (int rep = 0; rep < 100; ++rep) {
        const int M = 2 + static_cast<int>(gen() % 7);
        std::vector<double> r = {start(gen)};
        for (int i = 1; i < M; ++i) {
            r.push_back(r.back() + gap(gen));
        }
        const auto niw = make_niw(r);
        const double t = tr(gen);
        const auto g = pcomb::good_combine(niw, pcomb::LogTau{t});
        const auto cs = pcomb::cluster(niw, 0.0);
        const auto gen_res = pcomb::general_combine(cs, pcomb::LogTau{t});
        CHECK_THAT(gen_res.probability, WithinRel(g.probability, 1e-10));
    }
}

TEST_CASE("exact methods return one at t equal zero") {
    // Sum of lambdas is one; grouped composition coefficients sum the same
    // way. Configurations stay well separated with shallow multiplicities:
    // packing more tied values only adds cancellation noise to an identity
    // that is already fully exercised by one deep cluster.
    std::mt19937 gen(31415);
    std::uniform_real_distribution<double> gap(0.6, 1.5);
    std::uniform_real_distribution<double> start(0.3, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 2 + static_cast<int>(gen() % 3);
        std::vector<double> centers = {start(gen)};
        for (int i = 1; i < m; ++i) {
            centers.push_back(centers.back() + gap(gen));
        }
        const auto g = pcomb::good_combine(make_niw(centers), pcomb::LogTau{0.0});
        CHECK_THAT(g.probability, WithinRel(1.0, 1e-10));

        const std::size_t deep = gen() % m;
        std::vector<double> grouped;
        for (int k = 0; k < m; ++k) {
            const std::size_t n = static_cast<std::size_t>(k) == deep ? 3 : 1 + gen() % 2;
            grouped.insert(grouped.end(), n, centers[static_cast<std::size_t>(k)]);
        }
        const auto cs = pcomb::cluster(make_niw(grouped), 0.0);
        const auto res = pcomb::general_combine(cs, pcomb::LogTau{0.0});
        CHECK_THAT(res.probability, WithinRel(1.0, 1e-10));
    }
}

TEST_CASE("grouped evaluation validates its arguments") {
    using pcomb::detail::ftilde;
    const std::vector<double> r2 = {0.5, 1.5};
    CHECK_THROWS_AS(ftilde({}, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ftilde(r2, std::vector<int>{1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ftilde(r2, std::vector<int>{1, 0}, 1.0), std::invalid_argument);
    const std::vector<double> bad = {1.5, 0.5};
    CHECK_THROWS_AS(ftilde(bad, std::vector<int>{1, 1}, 1.0), std::invalid_argument);
}
