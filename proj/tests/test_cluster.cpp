// Hierarchical merging of normalized inverse weights and the deviation
// moments the expansion consumes.

#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "pcomb/cluster.hpp"
#include "pcomb/normalize.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

pcomb::NormalizedInverseWeights make_niw(std::vector<double> r) {
    // Direct construction for fixtures whose values are already the r's we
    // want; from_raw would rescale them to sum to M.
    pcomb::NormalizedInverseWeights out;
    out.r = std::move(r);
    out.source.resize(out.r.size());
    for (std::size_t i = 0; i < out.source.size(); ++i) {
        out.source[i] = i;
    }
    return out;
}

const std::vector<double> walkthrough = {0.50, 0.70, 0.70, 0.71, 0.74, 1.03, 1.80, 1.82};

} // namespace

TEST_CASE("tight radius keeps seven effective clusters") {
    const auto cs = pcomb::cluster(make_niw(walkthrough), 0.005);
    REQUIRE(cs.count() == 7);
    const std::size_t mult[] = {1, 2, 1, 1, 1, 1, 1};
    const double centers[] = {0.50, 0.70, 0.71, 0.74, 1.03, 1.80, 1.82};
    for (std::size_t k = 0; k < 7; ++k) {
        CHECK(cs.clusters[k].size() == mult[k]);
        // Identical-value runs keep their shared value as the exact center.
        CHECK(cs.clusters[k].center == centers[k]);
        for (double d : cs.clusters[k].deviations) {
            CHECK(d == 0.0);
        }
    }
    CHECK(cs.zero_deviation());
}

TEST_CASE("wide radius merges to four clusters with the recorded ledger") {
    const auto cs = pcomb::cluster(make_niw(walkthrough), 0.05);
    REQUIRE(cs.count() == 4);

    const double centers[] = {0.50, 0.7125, 1.03, 1.81};
    const std::size_t mult[] = {1, 4, 1, 2};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(cs.clusters[k].size() == mult[k]);
        // Centers are occurrence-weighted means of the original values; the
        // decimal literals are exact up to their own double rounding.
        CHECK_THAT(cs.clusters[k].center, WithinAbs(centers[k], 1e-15));
    }

    const double ledger2[] = {-0.0125, -0.0125, -0.0025, 0.0275};
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK_THAT(cs.clusters[1].deviations[j], WithinAbs(ledger2[j], 1e-14));
    }
    const double ledger4[] = {-0.01, 0.01};
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK_THAT(cs.clusters[3].deviations[j], WithinAbs(ledger4[j], 1e-14));
    }

    CHECK_FALSE(cs.zero_deviation());
    // Spread records the full cluster width, max(values) - min(values).
    CHECK_THAT(cs.clusters[1].spread, WithinAbs(0.04, 1e-14));
    CHECK_THAT(cs.clusters[3].spread, WithinAbs(0.02, 1e-14));
}

TEST_CASE("merging compares evolving centers, not original values") {
    // 0.70x2 + 0.71 merge first (gap 0.01), giving center 0.70333; the gap
    // to 0.74 is then 0.03667. A radius between the two shows the second
    // merge is driven by the merged center.
    const auto tight = pcomb::cluster(make_niw(walkthrough), 0.03);
    REQUIRE(tight.count() == 5);
    CHECK_THAT(tight.clusters[1].center, WithinAbs(2.11 / 3.0, 1e-15));
    CHECK(tight.clusters[1].size() == 3);
    CHECK(tight.clusters[2].center == 0.74);

    const auto wide = pcomb::cluster(make_niw(walkthrough), 0.04);
    REQUIRE(wide.count() == 4);
    CHECK(wide.clusters[1].size() == 4);
    CHECK_THAT(wide.clusters[1].center, WithinAbs(0.7125, 1e-15));
}

TEST_CASE("gap equal to the radius still merges") {
    // 1.125 - 1.0 is exactly representable, so the gap == eta case is real.
    const auto cs = pcomb::cluster(make_niw({1.0, 1.125, 2.0}), 0.125);
    REQUIRE(cs.count() == 2);
    CHECK(cs.clusters[0].size() == 2);
    CHECK(cs.clusters[0].center == 1.0625);

    const auto below = pcomb::cluster(make_niw({1.0, 1.125, 2.0}), 0.124);
    CHECK(below.count() == 3);
}

TEST_CASE("zero radius separates everything except identical values") {
    const auto cs = pcomb::cluster(make_niw({0.8, 0.8, 0.9, 1.5}), 0.0);
    REQUIRE(cs.count() == 3);
    CHECK(cs.clusters[0].size() == 2);
    CHECK(cs.clusters[0].center == 0.8);
    CHECK(cs.clusters[0].deviations[0] == 0.0);
    CHECK(cs.clusters[0].deviations[1] == 0.0);
    CHECK(cs.zero_deviation());
    CHECK(cs.eta == 0.0);
}

TEST_CASE("cluster argument validation") {
    CHECK_THROWS_AS(pcomb::cluster(make_niw({1.0}), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(pcomb::cluster(make_niw({}), 0.05), std::invalid_argument);
}

TEST_CASE("cluster structure invariants hold on random inputs") {
    std::mt19937 gen(7311);
    std::uniform_real_distribution<double> val(0.1, 4.0);
    std::uniform_real_distribution<double> radius(0.0, 0.6);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t M = 1 + gen() % 12;
        std::vector<double> r;
        for (std::size_t i = 0; i < M; ++i) {
            r.push_back(val(gen));
        }
        if (rep % 3 == 0 && M > 2) {
            r[1] = r[0]; // exercise identical-value runs
        }
        std::sort(r.begin(), r.end());
        const double eta = radius(gen);
        const auto cs = pcomb::cluster(make_niw(r), eta);

        std::size_t total = 0;
        for (std::size_t k = 0; k < cs.count(); ++k) {
            const auto& c = cs.clusters[k];
            REQUIRE(c.size() >= 1);
            total += c.size();
            if (k > 0) {
                CHECK(cs.clusters[k - 1].center < c.center);
                // Merging stopped, so surviving center gaps exceed eta.
                CHECK(c.center - cs.clusters[k - 1].center > eta);
            }

            // Center is the mean of the original member values.
            pcomb::NeumaierSum mean;
            pcomb::NeumaierSum dev_total;
            for (std::size_t j = 0; j < c.size(); ++j) {
                mean.add(c.values[j]);
                dev_total.add(c.deviations[j]);
                CHECK(c.deviations[j] == c.values[j] - c.center);
                // The recorded width bounds every deviation magnitude.
                CHECK(std::fabs(c.deviations[j]) <= c.spread);
            }
            CHECK_THAT(mean.value() / static_cast<double>(c.size()),
                       WithinAbs(c.center, 1e-13 * std::fabs(c.center)));
            CHECK_THAT(dev_total.value(), WithinAbs(0.0, 1e-13 * std::fabs(c.center) * c.size()));
            CHECK(c.spread == c.values.back() - c.values.front());
        }
        CHECK(total == M);

        // Every original index appears exactly once across the clusters.
        std::vector<int> seen(M, 0);
        for (const auto& c : cs.clusters) {
            for (std::size_t s : c.source) {
                REQUIRE(s < M);
                ++seen[s];
            }
        }
        for (int n : seen) {
            CHECK(n == 1);
        }
    }
}

TEST_CASE("moments follow the deviation ledger") {
    const auto cs = pcomb::cluster(make_niw(walkthrough), 0.05);
    const auto y = pcomb::moments(cs, 4);
    REQUIRE(y.g_max == 4);

    // Hand-computed from the ledger (-0.0125, -0.0125, -0.0025, 0.0275).
    CHECK_THAT(y(1, 2), WithinRel(0.0005375, 1e-12));
    const double y23 = -(2.0 * std::pow(-0.0125, 3) + std::pow(-0.0025, 3) + std::pow(0.0275, 3)) / 3.0;
    CHECK_THAT(y(1, 3), WithinRel(y23, 1e-9));
    CHECK_THAT(y(3, 2), WithinRel(1e-4, 1e-12));
    // Mirrored pair: odd moments cancel exactly.
    CHECK(y(3, 3) == 0.0);

    // Zero-deviation clusters have identically zero moments.
    CHECK(y(0, 2) == 0.0);
    CHECK(y(2, 3) == 0.0);

    CHECK_THROWS_AS(pcomb::moments(cs, 1), std::invalid_argument);
}

TEST_CASE("moment magnitudes are bounded by the recorded spread") {
    std::mt19937 gen(40901);
    std::uniform_real_distribution<double> val(0.2, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t M = 2 + gen() % 8;
        std::vector<double> r;
        for (std::size_t i = 0; i < M; ++i) {
            r.push_back(val(gen));
        }
        std::sort(r.begin(), r.end());
        const auto cs = pcomb::cluster(make_niw(r), 0.4);
        const auto y = pcomb::moments(cs, 6);
        for (std::size_t k = 0; k < cs.count(); ++k) {
            const auto& c = cs.clusters[k];
            for (int g = 2; g <= 6; ++g) {
                const double bound =
                    static_cast<double>(c.size()) * std::pow(c.spread, g) / g + 1e-300;
                CHECK(std::fabs(y(k, g)) <= bound * (1.0 + 1e-12));
            }
        }
    }
}
