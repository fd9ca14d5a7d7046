#include "sampleobs/spectral.hpp"

#include "sampleobs/errors.hpp"
#include "support/builders.hpp"
#include "support/dense_reference.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace sampleobs;
using sampleobs::testing::brute_minimal_period;
using sampleobs::testing::diag_real;
using sampleobs::testing::ninth_order_roots_system;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("rationalize_phase_gap: opposite-sign pair") {
    const auto f = rationalize_phase_gap(kPi, 100, 1e-9);
    REQUIRE(f.has_value());
    CHECK(f->num == 1);
    CHECK(f->den == 2);
}

TEST_CASE("rationalize_phase_gap: ninth-root spacing") {
    const auto f = rationalize_phase_gap(2.0 * kPi / 9.0, 100, 1e-9);
    REQUIRE(f.has_value());
    CHECK(f->num == 1);
    CHECK(f->den == 9);
}

TEST_CASE("rationalize_phase_gap: 1 radian has no small period") {
    // Oracle: no h <= 50 brings h*1.0 near a multiple of 2*pi at this tol.
    for (std::int64_t h = 1; h <= 50; ++h) {
        const double err = std::abs(std::remainder(static_cast<double>(h) * 1.0, 2.0 * kPi));
        CHECK(err > 50.0 * 1e-9);
    }
    CHECK_FALSE(rationalize_phase_gap(1.0, 50, 1e-9).has_value());
}

TEST_CASE("minimal period: opposite real pair is 2") {
    const auto h = minimal_pathological_period(Eigenvalue::real(0.5), Eigenvalue::real(-0.5));
    REQUIRE(h.has_value());
    CHECK(*h == 2);
    CHECK(brute_minimal_period(Eigenvalue::real(0.5), Eigenvalue::real(-0.5), 10) == 2);
}

TEST_CASE("minimal period: conjugate pair at +-pi/3") {
    const Eigenvalue a{0.8, Phase::radians(kPi / 3.0)};
    const Eigenvalue b{0.8, Phase::radians(-kPi / 3.0)};
    // Oracle first: direct power comparison finds the first collision at 3.
    const auto brute = brute_minimal_period(a, b, 10);
    REQUIRE(brute.has_value());
    CHECK(*brute == 3);
    CHECK(minimal_pathological_period(a, b) == brute);
}

TEST_CASE("minimal period: distinct moduli never collide") {
    CHECK_FALSE(minimal_pathological_period(Eigenvalue::real(0.9), Eigenvalue::real(0.8)));
}

TEST_CASE("minimal period: equal eigenvalues are a caller bug") {
    CHECK_THROWS_AS(minimal_pathological_period(Eigenvalue::real(0.5), Eigenvalue::real(0.5)),
                    DegeneratePair);
}

TEST_CASE("pathology report: ninth-order roots system") {
    const PathologyReport report = pathology_report(ninth_order_roots_system());
    CHECK(report.pairs.size() == 36);
    for (const auto& pair : report.pairs) {
        REQUIRE(pair.minimal_period.has_value());
        CHECK(pair.exact);
        CHECK((*pair.minimal_period == 3 || *pair.minimal_period == 9));
    }
    CHECK(report.global_minimal_periods == std::vector<std::int64_t>{3, 9});
}

TEST_CASE("pathology report: distinct moduli yield no pairs") {
    const PathologyReport report = pathology_report(diag_real({0.5, 0.7}));
    REQUIRE(report.pairs.size() == 1);
    CHECK_FALSE(report.pairs.front().minimal_period.has_value());
    CHECK(report.global_minimal_periods.empty());
}

TEST_CASE("pathology report: single opposite pair") {
    const PathologyReport report = pathology_report(diag_real({0.5, -0.5, 0.7}));
    int pathological = 0;
    for (const auto& pair : report.pairs) {
        if (pair.minimal_period) {
            ++pathological;
            CHECK(*pair.minimal_period == 2);
        }
    }
    CHECK(pathological == 1);
}

TEST_CASE("is_pathological_period on the ninth-order report") {
    const PathologyReport report = pathology_report(ninth_order_roots_system());
    CHECK(is_pathological_period(report, 9));
    CHECK(is_pathological_period(report, 3));
    CHECK(is_pathological_period(report, 12));
    CHECK_FALSE(is_pathological_period(report, 7));

    const PathologyReport empty = pathology_report(diag_real({0.5, 0.7}));
    CHECK_FALSE(is_pathological_period(empty, 7));
    CHECK_FALSE(is_pathological_period(empty, 1));
}

TEST_CASE("property: minimality and soundness of detected periods") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> q_dist(2, 64);
    std::uniform_real_distribution<double> mod(0.4, 1.4);

    for (int trial = 0; trial < 100; ++trial) {
        const int q = q_dist(rng);
        std::uniform_int_distribution<int> p_dist(-(q - 1) / 2, q / 2);
        int pa = p_dist(rng), pb = p_dist(rng);
        if (pa == pb) continue;
        const double m = mod(rng);
        const Eigenvalue a{m, Phase::exact(pa, q)};
        const Eigenvalue b{m, Phase::exact(pb, q)};

        const auto h_bar = minimal_pathological_period(a, b, 10000, 1e-9);
        REQUIRE(h_bar.has_value());

        // Soundness: polar evaluation collides at h_bar.
        const std::complex<double> za = a.value(), zb = b.value();
        const std::complex<double> powa = std::polar(std::pow(m, double(*h_bar)),
                                                     a.phase.times(*h_bar).value());
        const std::complex<double> powb = std::polar(std::pow(m, double(*h_bar)),
                                                     b.phase.times(*h_bar).value());
        CHECK(std::abs(powa - powb) <= 10.0 * 1e-9 * std::abs(powa));

        // Minimality: no smaller h collides.
        std::complex<double> pa_acc = 1.0, pb_acc = 1.0;
        for (std::int64_t h = 1; h < *h_bar; ++h) {
            pa_acc *= za;
            pb_acc *= zb;
            CHECK(std::abs(pa_acc - pb_acc) > 1e-9 * std::abs(pa_acc));
        }
    }
}

TEST_CASE("property: every multiple of h_bar is pathological") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> q_dist(2, 32);
    for (int trial = 0; trial < 50; ++trial) {
        const int q = q_dist(rng);
        std::uniform_int_distribution<int> p_dist(1, q / 2 == 0 ? 1 : q / 2);
        SystemSpec s;
        s.blocks.push_back({Eigenvalue{0.9, Phase::exact(0, 1)}, 1});
        s.blocks.push_back({Eigenvalue{0.9, Phase::exact(p_dist(rng), q)}, 1});
        s.C = {1.0, 1.0};
        const PathologyReport report = pathology_report(s, 10000);
        REQUIRE_FALSE(report.global_minimal_periods.empty());
        const std::int64_t h_bar = report.global_minimal_periods.front();
        for (std::int64_t m = 1; m * h_bar <= 1000000; m *= 7) {
            CHECK(is_pathological_period(report, m * h_bar));
        }
    }
}

TEST_CASE("property: exact and float phase paths agree for q <= 64") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> q_dist(2, 64);
    for (int trial = 0; trial < 200; ++trial) {
        const int qa = q_dist(rng), qb = q_dist(rng);
        std::uniform_int_distribution<int> pa_dist(-(qa - 1) / 2, qa / 2);
        std::uniform_int_distribution<int> pb_dist(-(qb - 1) / 2, qb / 2);
        const int pa = pa_dist(rng), pb = pb_dist(rng);

        const Eigenvalue a_exact{0.7, Phase::exact(pa, qa)};
        const Eigenvalue b_exact{0.7, Phase::exact(pb, qb)};
        const Eigenvalue a_float{0.7, Phase::radians(a_exact.phase.value())};
        const Eigenvalue b_float{0.7, Phase::radians(b_exact.phase.value())};

        std::optional<std::int64_t> exact, fl;
        bool exact_degenerate = false, float_degenerate = false;
        try {
            exact = minimal_pathological_period(a_exact, b_exact, 10000, 1e-9);
        } catch (const DegeneratePair&) {
            exact_degenerate = true;
        }
        try {
            fl = minimal_pathological_period(a_float, b_float, 10000, 1e-9);
        } catch (const DegeneratePair&) {
            float_degenerate = true;
        }
        CHECK(exact_degenerate == float_degenerate);
        if (!exact_degenerate) CHECK(exact == fl);
    }
}
