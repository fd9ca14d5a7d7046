#include "sampleobs/sysmodel.hpp"

#include "sampleobs/json_io.hpp"
#include "support/builders.hpp"

#include "doctest.h"
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace sampleobs;
using sampleobs::testing::diag_real;

TEST_CASE("exact phase normalization") {
    const Phase a = Phase::exact(3, 9);
    REQUIRE(a.exact_value() != nullptr);
    CHECK(a.exact_value()->p == 1);
    CHECK(a.exact_value()->q == 3);

    const Phase half = Phase::exact(-1, 2);  // -pi wraps to pi
    CHECK(half.exact_value()->p == 1);
    CHECK(half.exact_value()->q == 2);

    const Phase wrapped = Phase::exact(7, 9);  // 7/9 of a turn == -2/9
    CHECK(wrapped.exact_value()->p == -2);
    CHECK(wrapped.exact_value()->q == 9);

    CHECK(Phase::exact(0, 5).exact_value()->q == 1);
}

TEST_CASE("phase powers stay exact and wrap correctly") {
    const Phase ninth = Phase::exact(1, 9);
    const Phase p9 = ninth.times(9);
    REQUIRE(p9.exact_value() != nullptr);
    CHECK(p9.exact_value()->p == 0);
    CHECK(p9.exact_value()->q == 1);

    const Phase p5 = ninth.times(5);
    CHECK(p5.exact_value()->p == -4);  // 5/9 of a turn == -4/9
    CHECK(p5.exact_value()->q == 9);

    const Phase f = Phase::radians(1.0);
    CHECK(f.times(7).value() == doctest::Approx(wrap_angle(7.0)).epsilon(1e-12));

    const Phase neg = Phase::exact(-2, 9);  // (-2/9) * -3 = 2/3 of a turn = -1/3
    CHECK(neg.times(-3).exact_value()->p == -1);
    CHECK(neg.times(-3).exact_value()->q == 3);
}

TEST_CASE("eigenvalue construction") {
    const Eigenvalue from_neg = Eigenvalue::real(-0.5);
    CHECK(from_neg.modulus == 0.5);
    CHECK(from_neg.phase.exact_value()->p == 1);
    CHECK(from_neg.phase.exact_value()->q == 2);
    CHECK(from_neg.value().real() == doctest::Approx(-0.5));

    const Eigenvalue z = Eigenvalue::from_complex({-0.75, -0.273});
    CHECK(z.modulus == doctest::Approx(std::hypot(0.75, 0.273)));
    CHECK(z.value().imag() == doctest::Approx(-0.273));
}

TEST_CASE("validate: minimal observable scalar system") {
    SystemSpec s;
    s.blocks.push_back({Eigenvalue::real(0.5), 1});
    s.C = {1.0};
    CHECK(validate(s).ok());
    CHECK(dimension(s) == 1);
}

TEST_CASE("validate: zero eigenvalue is rejected") {
    SystemSpec s;
    s.blocks.push_back({Eigenvalue{0.0, Phase::exact(0, 1)}, 2});
    s.C = {0.0, 1.0};
    const ValidationResult v = validate(s);
    REQUIRE_FALSE(v.ok());
    bool found = false;
    for (const auto& violation : v.violations) {
        if (violation.assumption == "nonzero_eigenvalues") found = true;
    }
    CHECK(found);
}

TEST_CASE("validate: duplicate block eigenvalues break single-output observability") {
    const SystemSpec s = diag_real({2.0, 2.0});
    const ValidationResult v = validate(s);
    REQUIRE_FALSE(v.ok());
    CHECK(v.violations.front().assumption == "observable_pair");
}

TEST_CASE("validate: zero leading C entry") {
    SystemSpec s;
    s.blocks.push_back({Eigenvalue::real(0.5), 2});
    s.C = {0.0, 1.0};
    const ValidationResult v = validate(s);
    REQUIRE_FALSE(v.ok());
    CHECK(v.violations.front().assumption == "observable_pair");
}

TEST_CASE("dimension sums block sizes") {
    SystemSpec a;
    a.blocks.push_back({Eigenvalue::real(0.5), 3});
    a.C = {1, 0, 0};
    CHECK(dimension(a) == 3);

    SystemSpec b;
    b.blocks.push_back({Eigenvalue::real(0.5), 1});
    b.blocks.push_back({Eigenvalue::real(0.7), 2});
    b.C = {1, 1, 0};
    CHECK(dimension(b) == 3);

    CHECK(dimension(sampleobs::testing::ninth_order_roots_system()) == 9);
}

TEST_CASE("schedule normalization") {
    const Schedule s = Schedule::from_instants({5, 1, 3, 3, 1});
    CHECK(s.instants == std::vector<std::int64_t>{1, 3, 5});
    CHECK_THROWS_AS(Schedule::from_instants({-1, 0}), std::invalid_argument);
}

TEST_CASE("property: validation verdict matches invariant evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mod(0.2, 1.8);
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> corruption(0, 3);

    for (int trial = 0; trial < 200; ++trial) {
        SystemSpec s;
        const int blocks = count(rng);
        for (int i = 0; i < blocks; ++i) {
            const double m = mod(rng) + i;  // distinct moduli by construction
            s.blocks.push_back({Eigenvalue::real(m), 1});
        }
        s.C.assign(static_cast<std::size_t>(blocks), 1.0);

        const int kind = corruption(rng);
        bool expect_ok = true;
        if (kind == 1) {
            s.blocks.back().eigenvalue.modulus = 0.0;
            expect_ok = false;
        } else if (kind == 2 && blocks >= 2) {
            s.blocks.back().eigenvalue = s.blocks.front().eigenvalue;
            expect_ok = false;
        } else if (kind == 3) {
            s.C.front() = 0.0;
            expect_ok = false;
        }
        CHECK(validate(s).ok() == expect_ok);
    }
}

TEST_CASE("system JSON round-trip") {
    SystemSpec s;
    s.blocks.push_back({Eigenvalue{0.7981, Phase::exact(1, 9)}, 1});
    s.blocks.push_back({Eigenvalue{0.5, Phase::radians(0.1234567890123)}, 2});
    s.C = {1.0, 0.25, -0.5};
    Eigen::MatrixXd b(3, 2);
    b << 1, 0, 0, 1, 0.5, -0.5;
    s.B = b;
    Eigen::RowVectorXd d(2);
    d << 0.1, 0.0;
    s.D = d;

    const SystemSpec back = system_from_json(system_to_json(s));
    REQUIRE(back.blocks.size() == 2);
    CHECK(back.blocks[0].eigenvalue.phase == s.blocks[0].eigenvalue.phase);  // bit-exact rational
    CHECK(back.blocks[0].eigenvalue.modulus == s.blocks[0].eigenvalue.modulus);
    CHECK(back.blocks[1].eigenvalue.phase.value() ==
          doctest::Approx(s.blocks[1].eigenvalue.phase.value()).epsilon(1e-15));
    CHECK(back.C == s.C);
    CHECK(back.B->isApprox(*s.B));
    CHECK(back.D->isApprox(*s.D));
}

TEST_CASE("system JSON: complex convenience key and radians phase") {
    const auto j = nlohmann::json::parse(R"({
        "blocks": [{"complex": [0.0, 0.5], "size": 1},
                   {"modulus": 0.7, "phase": {"radians": 0.0}, "size": 1}],
        "C": [1, 1]
    })");
    const SystemSpec s = system_from_json(j);
    CHECK(s.blocks[0].eigenvalue.modulus == doctest::Approx(0.5));
    CHECK(s.blocks[0].eigenvalue.phase.value() == doctest::Approx(std::numbers::pi / 2));
    CHECK(validate(s).ok());
}

TEST_CASE("schedule JSON accepts scheme-result shaped files") {
    const auto plain = nlohmann::json::parse(R"({"instants": [0, 7, 14], "provenance": "regular"})");
    const Schedule a = schedule_from_json(plain);
    CHECK(a.instants == std::vector<std::int64_t>{0, 7, 14});
    CHECK(a.provenance == Provenance::regular);

    const auto scheme = nlohmann::json::parse(R"({"scheme": "regular", "schedule": [1, 2, 3]})");
    CHECK(schedule_from_json(scheme).instants == std::vector<std::int64_t>{1, 2, 3});
}
