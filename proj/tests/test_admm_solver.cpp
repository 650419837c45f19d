#include <doctest.h>

#include <cmath>

#include "parsid/admm_solver.hpp"
#include "parsid/analysis.hpp"
#include "parsid/rng.hpp"
#include "support/instances.hpp"

using namespace parsid;

namespace {

// Constraint set with no observations over a one-real-pole grid.
FeasibleSet no_data_set() {
    GridConfig gc;
    gc.radii = {0.5};
    gc.points_per_radius = 2;
    gc.per_radius_counts = {2};
    PoleGrid grid = build_grid(gc);
    grid.points.resize(1);
    grid.groups.resize(1);
    grid.alpha.resize(1);
    ChunkedDataset ds;
    ds.quantizer = make_uniform(2, 1.0);
    Chunk c;
    c.input = {1.0, -1.0};
    ds.chunks.push_back(c);
    return assemble(ds, grid);
}

}  // namespace

TEST_SUITE_BEGIN("admm_solver");

TEST_CASE("initialization") {
    const FeasibleSet set = no_data_set();
    SolverConfig cfg;

    SUBCASE("same seed gives the same state") {
        auto r1 = make_rng(9), r2 = make_rng(9);
        const SolverState a = initialize(set, cfg, r1);
        const SolverState b = initialize(set, cfg, r2);
        CHECK(a.w == b.w);
        CHECK(a.lambda2 == b.lambda2);
        CHECK(a.theta == b.theta);
    }
    SUBCASE("zero sigma zeroes everything") {
        cfg.init_sigma = 0.0;
        auto rng = make_rng(9);
        const SolverState st = initialize(set, cfg, rng);
        CHECK(st.w.cwiseAbs().maxCoeff() == 0.0);
        CHECK(st.f.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("default sigma keeps draws within 5 sigma nearly always") {
        auto rng = make_rng(10);
        int inside = 0;
        const int total = 100000;
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < total; ++i)
            if (std::abs(cfg.init_sigma * g(rng)) <= 0.5) ++inside;
        CHECK(static_cast<double>(inside) / total >= 0.999);
    }
}

TEST_CASE("all-zero state with unit theta is a fixed point on a data-free set") {
    const FeasibleSet set = no_data_set();
    SolverConfig cfg;
    cfg.init_sigma = 0.0;
    auto rng = make_rng(1);
    SolverState st = initialize(set, cfg, rng);
    st.theta.setOnes();  // stationary dual of the epigraph offset

    SolverState before = st;
    iterate_once(st, set, cfg);
    CHECK((st.w - before.w).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.d - before.d).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.t - before.t).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.s - before.s).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.f - before.f).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.lambda1 - before.lambda1).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.lambda2 - before.lambda2).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((st.theta - before.theta).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("one iteration composes the block updates") {
    const auto tiny = instances::tiny_instance(5);
    const FeasibleSet set = assemble(tiny.dataset, tiny.grid);
    SolverConfig cfg;
    cfg.tol_inner = 1e-8;
    cfg.max_inner = 50000;
    auto rng = make_rng(31);
    SolverState st = initialize(set, cfg, rng);
    const SolverState prev = st;

    Projector projector(set, cfg.inner_rho);
    iterate_once(st, set, projector, cfg);

    // (d, t) from the epigraph projection of the shifted caps
    for (int g = 0; g < set.layout.groups; ++g) {
        const auto [d, t] = project_epigraph_lp(
            prev.f(g) - prev.lambda2(g) / cfg.rho,
            prev.t_mirror(g) - prev.theta(g) / cfg.rho, cfg.p);
        CHECK(st.d(g) == doctest::Approx(d).epsilon(1e-12));
        CHECK(st.t(g) == doctest::Approx(t).epsilon(1e-12));
    }
    // (s, f) from the set projection of the shifted copies
    const auto pr = project(set, prev.w + prev.lambda1 / cfg.rho,
                            st.d + prev.lambda2 / cfg.rho,
                            ProjectionOptions{1e-8, 50000, cfg.inner_rho, false});
    CHECK((st.s - pr.w).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((st.f - pr.f).lpNorm<Eigen::Infinity>() <= 1e-6);

    // closed-form block and exact dual identities
    CHECK((st.w - (st.s - prev.lambda1 / cfg.rho)).lpNorm<Eigen::Infinity>() <= 1e-12);
    const Eigen::VectorXd tz =
        st.t + (prev.theta.array() - 1.0).matrix() / cfg.rho;
    CHECK((st.t_mirror - tz).lpNorm<Eigen::Infinity>() <= 1e-12);
    const Eigen::VectorXd l1 = prev.lambda1 + cfg.rho * (st.w - st.s);
    const Eigen::VectorXd l2 = prev.lambda2 + cfg.rho * (st.d - st.f);
    const Eigen::VectorXd th = prev.theta + cfg.rho * (st.t - st.t_mirror);
    CHECK((st.lambda1 - l1).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((st.lambda2 - l2).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((st.theta - th).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("the parameter gap collapses after one iteration") {
    const auto tiny = instances::tiny_instance(6);
    const FeasibleSet set = assemble(tiny.dataset, tiny.grid);
    SolverConfig cfg;
    auto rng = make_rng(8);
    SolverState st = initialize(set, cfg, rng);
    st.lambda1.setZero();
    Projector projector(set, cfg.inner_rho);

    const double before = (st.w - st.s).norm();
    iterate_once(st, set, projector, cfg);
    const double after = (st.w - st.s).norm();
    CHECK(after <= before + 1e-12);
    CHECK(after <= 1e-12);  // w-update copies s when lambda1 = 0
}

TEST_CASE("zero-signal data drives the detected order to zero") {
    // All observations sit in a cell containing zero, so the constant r = 0
    // explains everything; the sparsifier should zero every cap.
    GridConfig gc;
    gc.radii = {0.5, 0.8};
    gc.points_per_radius = 6;
    gc.per_radius_counts.clear();
    const PoleGrid grid = build_grid(gc);

    ChunkedDataset ds;
    ds.quantizer = make_uniform(3, 3.0);
    ds.noise_bound_eps = 0.05;
    Chunk c;
    c.input.assign(20, 0.0);
    const int zero_cell = quantize(ds.quantizer, 0.0).level_index;
    for (int k = 1; k <= 20; ++k) c.observed[k] = zero_cell;
    ds.chunks.push_back(c);

    SolverConfig cfg;
    cfg.seed = 3;
    const auto res = solve(ds, grid, cfg);
    CHECK(res.converged);
    CHECK(res.detected_order == 0);
    CHECK(res.zeta_out[0] == 0.0);
    const auto [lo, hi] = cell_bounds(ds.quantizer, zero_cell);
    CHECK(res.system.r >= lo - ds.noise_bound_eps - 1e-6);
    CHECK(res.system.r <= hi + ds.noise_bound_eps + 1e-6);
}

TEST_CASE("default instance run converges and reports a feasible solution") {
    const auto [ds, truth] = instances::default_instance(2024);
    const PoleGrid grid = instances::default_grid();
    SolverConfig cfg = instances::default_solver(11);

    const auto res = solve(ds, grid, cfg);
    CHECK(res.iterations <= 100);
    CHECK(res.history.size() == static_cast<std::size_t>(res.iterations));
    for (const auto& rec : res.history) {
        CHECK(std::isfinite(rec.df_rel));
        CHECK(rec.df_norm >= 0.0);
    }
    if (res.converged)
        CHECK(res.history.back().df_norm <= cfg.stop_tol);

    // the reported copies live in the set (checked at 10x inner tolerance)
    const FeasibleSet set = assemble(ds, grid.with_horizon(50));
    CHECK(is_feasible(set, res.w_solution, res.caps, 10.0 * cfg.tol_inner).feasible);

    // every observed level is reproduced exactly
    for (int i = 0; i < ds.chunk_count(); ++i) {
        for (const auto& [k, lvl] : ds.chunks[i].observed)
            CHECK(res.model_levels[i][k - 1] == lvl);
        CHECK(res.zeta_out[i] == 0.0);
    }

    // order detection matches the caps
    CHECK(res.detected_order == detected_order(res.caps, grid, cfg.eps_bar));
}

TEST_CASE("l1 mode runs the same pipeline") {
    const auto [ds, truth] = instances::default_instance(7);
    const PoleGrid grid = instances::default_grid();
    const auto res = solve_l1(ds, grid, instances::default_solver(5));
    CHECK(res.mode == "l1");
    CHECK(res.config.p.is_l1());
    CHECK(res.iterations >= 1);
    for (int i = 0; i < ds.chunk_count(); ++i) CHECK(res.zeta_out[i] == 0.0);
}

TEST_CASE("identical configuration reproduces the iterate history") {
    const auto tiny = instances::tiny_instance(9);
    SolverConfig cfg;
    cfg.max_outer = 12;
    cfg.seed = 4;
    GridConfig gc;
    gc.radii = {0.5};
    gc.points_per_radius = 3;
    gc.per_radius_counts.clear();
    const PoleGrid grid = build_grid(gc);
    const auto a = solve(tiny.dataset, grid, cfg);
    const auto b = solve(tiny.dataset, grid, cfg);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].df_norm == b.history[i].df_norm);
        CHECK(a.history[i].objective == b.history[i].objective);
    }
    CHECK(a.w_solution == b.w_solution);
}

TEST_SUITE_END();
