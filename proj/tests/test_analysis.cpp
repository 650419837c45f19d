#include <doctest.h>

#include <cmath>

#include "parsid/analysis.hpp"
#include "parsid/experiments.hpp"
#include "support/instances.hpp"

using namespace parsid;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("detected order counts pole multiplicity") {
    GridConfig gc;
    gc.radii = {0.5};
    gc.points_per_radius = 4;  // +-0.5 and one pair
    gc.per_radius_counts.clear();
    const PoleGrid grid = build_grid(gc);
    REQUIRE(grid.group_count() == 3);

    Eigen::VectorXd f = Eigen::VectorXd::Zero(3);
    CHECK(detected_order(f, grid, 1e-3) == 0);
    // one real group above threshold
    for (int g = 0; g < 3; ++g)
        if (grid.groups[g].multiplicity == 1) {
            f.setZero();
            f(g) = 0.01;
            CHECK(detected_order(f, grid, 1e-3) == 1);
        }
    // one pair group above threshold
    for (int g = 0; g < 3; ++g)
        if (grid.groups[g].multiplicity == 2) {
            f.setZero();
            f(g) = 0.01;
            CHECK(detected_order(f, grid, 1e-3) == 2);
        }
    CHECK_THROWS_AS(detected_order(f, grid, 0.0), std::invalid_argument);
}

TEST_CASE("detected order is nonincreasing in the threshold") {
    const PoleGrid grid = instances::default_grid();
    Eigen::VectorXd f(grid.group_count());
    for (int g = 0; g < grid.group_count(); ++g) f(g) = std::abs(std::sin(0.37 * g)) * 0.01;
    int last = detected_order(f, grid, 1e-6);
    for (double eps : {1e-4, 1e-3, 5e-3, 1e-2}) {
        const int cur = detected_order(f, grid, eps);
        CHECK(cur <= last);
        last = cur;
    }
}

TEST_CASE("sensor errors") {
    CHECK(sensor_input_error({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(sensor_input_error({1.0, 2.0}, {0.0, 0.0}) == doctest::Approx(std::sqrt(5.0)));
    CHECK_THROWS_AS(sensor_input_error({1.0}, {1.0, 2.0}), std::invalid_argument);

    CHECK(sensor_output_error({0.5, -0.5}, {0.5, -0.5}) == 0.0);
    const double step = 2.0 / 7.0;
    CHECK(sensor_output_error({0.0, step}, {0.0, 0.0}) == doctest::Approx(step));
    CHECK_THROWS_AS(sensor_output_error({1.0}, {}), std::invalid_argument);
}

TEST_CASE("quantiles use linear interpolation") {
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({5.0}, 0.75) == doctest::Approx(5.0));
    const auto s = order_stats({3, 1, 2});
    CHECK(s.min == 1.0);
    CHECK(s.max == 3.0);
    CHECK(s.median == 2.0);
    CHECK(s.mean == doctest::Approx(2.0));
}

TEST_CASE("degenerate multi-system run collapses the quantiles") {
    SyntheticConfig data;
    data.chunk_count = 1;
    data.chunk_length = 12;
    data.order = 2;
    GridConfig gc;
    gc.radii = {0.6, 0.9};
    gc.points_per_radius = 8;
    gc.per_radius_counts.clear();
    SolverConfig sc;
    sc.max_outer = 40;

    const auto res = run_multi_system({2}, 1, data, gc, sc, 5, 1);
    REQUIRE(res.cells.size() == 2);
    for (const auto mode : {"lp", "l1"}) {
        const auto s = res.stats(2, mode);
        CHECK(s.count == 1);
        CHECK(s.min == s.max);
        CHECK(s.median == s.mean);
        CHECK(s.min == s.p25);
    }
}

TEST_CASE("multi-system runs are seed-reproducible and worker-invariant") {
    SyntheticConfig data;
    data.chunk_count = 1;
    data.chunk_length = 10;
    data.order = 2;
    GridConfig gc;
    gc.radii = {0.7};
    gc.points_per_radius = 6;
    gc.per_radius_counts.clear();
    SolverConfig sc;
    sc.max_outer = 25;

    const auto a = run_multi_system({1, 2}, 2, data, gc, sc, 42, 1);
    const auto b = run_multi_system({1, 2}, 2, data, gc, sc, 42, 2);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].detected_order == b.cells[i].detected_order);
        CHECK(a.cells[i].mode == b.cells[i].mode);
    }
}

TEST_CASE("noise sweep single value yields one row") {
    const auto [u, y] = instances::standin_sweep_series(3);
    GridConfig gc;
    gc.radii = {0.7, 0.95};
    gc.points_per_radius = 8;
    gc.per_radius_counts.clear();
    SolverConfig sc;
    sc.max_outer = 30;
    sc.rho = 50.0;

    const auto rows = run_noise_sweep(u, y, make_uniform(2, 0.7), 0.1, {0.05}, gc, sc, 7, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].eps == 0.05);
    CHECK(rows[0].status_lp == "ok");
    CHECK(rows[0].status_l1 == "ok");
    CHECK(rows[0].order_lp >= 0);
    CHECK(rows[0].order_l1 >= 0);
}

TEST_CASE("a noise bound beyond the signal range admits order zero") {
    const auto [u, y] = instances::standin_sweep_series(4);
    GridConfig gc;
    gc.radii = {0.7, 0.95};
    gc.points_per_radius = 8;
    gc.per_radius_counts.clear();
    SolverConfig sc;
    sc.max_outer = 60;
    sc.rho = 50.0;

    // eps wider than the saturation: a constant explains every cell
    const auto rows = run_noise_sweep(u, y, make_uniform(2, 0.7), 0.1, {2.0}, gc, sc, 7, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].order_lp == 0);
}

TEST_SUITE_END();
