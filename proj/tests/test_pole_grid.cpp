#include <doctest.h>

#include <cmath>
#include <complex>

#include "parsid/errors.hpp"
#include "parsid/pole_grid.hpp"
#include "support/oracles.hpp"

using namespace parsid;

TEST_SUITE_BEGIN("pole_grid");

TEST_CASE("unit circle with four points gives two real poles and one pair") {
    GridConfig cfg;
    cfg.radii = {1.0};
    cfg.points_per_radius = 4;
    cfg.per_radius_counts.clear();
    const PoleGrid grid = build_grid(cfg);

    CHECK(grid.pole_count() == 4);
    REQUIRE(grid.group_count() == 3);
    int reals = 0, pairs = 0;
    for (const auto& g : grid.groups) {
        if (g.multiplicity == 1) {
            ++reals;
            CHECK(std::abs(std::abs(g.q.real()) - 1.0) < 1e-15);
            CHECK(g.q.imag() == 0.0);
        } else {
            ++pairs;
            CHECK(g.q.imag() > 0.0);
            CHECK(std::abs(g.q - std::complex<double>(0.0, 1.0)) < 1e-15);
        }
    }
    CHECK(reals == 2);
    CHECK(pairs == 1);
}

TEST_CASE("two points on radius 0.5 are the real poles +-0.5") {
    GridConfig cfg;
    cfg.radii = {0.5};
    cfg.points_per_radius = 2;
    cfg.per_radius_counts.clear();
    const PoleGrid grid = build_grid(cfg);
    REQUIRE(grid.group_count() == 2);
    CHECK(grid.pole_count() == 2);
    CHECK(grid.groups[0].q == std::complex<double>(0.5, 0.0));
    CHECK(grid.groups[1].q == std::complex<double>(-0.5, 0.0));
}

TEST_CASE("default configuration yields 146 poles") {
    const PoleGrid grid = build_grid(GridConfig{});
    CHECK(grid.pole_count() == 146);
    for (const auto& p : grid.points) {
        CHECK(std::abs(p.value) <= 1.0 + 1e-15);
        if (p.kind == GridPoint::Kind::RealAxis)
            CHECK(p.value.imag() == 0.0);
        else
            CHECK(p.value.imag() > 0.0);
    }
}

TEST_CASE("construction is deterministic and order-stable") {
    const PoleGrid a = build_grid(GridConfig{});
    const PoleGrid b = build_grid(GridConfig{});
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].value == b.points[i].value);
        CHECK(a.points[i].group == b.points[i].group);
    }
}

TEST_CASE("excluding the real axis leaves only pairs") {
    GridConfig cfg;
    cfg.radii = {0.8};
    cfg.points_per_radius = 8;
    cfg.per_radius_counts.clear();
    cfg.include_real_axis = false;
    const PoleGrid grid = build_grid(cfg);
    for (const auto& g : grid.groups) CHECK(g.multiplicity == 2);
    CHECK(grid.pole_count() == 6);
}

TEST_CASE("configuration errors") {
    GridConfig cfg;
    cfg.radii = {};
    CHECK_THROWS_AS(build_grid(cfg), ConfigError);
    cfg.radii = {1.2};
    cfg.per_radius_counts.clear();
    CHECK_THROWS_AS(build_grid(cfg), ConfigError);
    cfg.radii = {0.5};
    cfg.points_per_radius = 1;
    CHECK_THROWS_AS(build_grid(cfg), ConfigError);
}

TEST_CASE("scaling weight basics") {
    CHECK(scaling_weight(0.0, 7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(scaling_weight(1.0, 49) == doctest::Approx(1.0 / 50.0).epsilon(1e-15));
    // |q| = 0.5, N = 49 against a high-precision evaluation.
    const double expect =
        static_cast<double>(oracles::alpha_reference(0.5L, 49));
    CHECK(scaling_weight(0.5, 49) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx((1.0 - 0.25) / (1.0 - std::pow(0.25, 50))));
}

TEST_CASE("weights lie in (0, 1] across the disk") {
    for (double rho : {0.0, 0.1, 0.3, 0.7, 0.9, 0.999, 1.0}) {
        for (int N : {1, 2, 10, 100, 1000}) {
            const double a = scaling_weight(rho, N);
            CHECK(a > 0.0);
            CHECK(a <= 1.0 + 1e-15);
            const double ref = static_cast<double>(oracles::alpha_reference(rho, N));
            CHECK(a == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("weight is continuous at the unit circle") {
    for (int N : {1, 10, 100, 1000}) {
        const double near = scaling_weight(1.0 - 1e-9, N);
        const double limit = 1.0 / (N + 1);
        CHECK(std::abs(near - limit) < 1e-6);
    }
}

TEST_CASE("with_horizon rescales alpha per group") {
    const PoleGrid grid = build_grid(GridConfig{}).with_horizon(50);
    CHECK(grid.horizon_N == 50);
    REQUIRE(grid.alpha.size() == static_cast<std::size_t>(grid.group_count()));
    for (int g = 0; g < grid.group_count(); ++g) {
        CHECK(grid.alpha[g] ==
              doctest::Approx(scaling_weight(std::abs(grid.groups[g].q), 50)));
    }
}

TEST_SUITE_END();
