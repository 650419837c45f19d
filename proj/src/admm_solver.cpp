#include "parsid/admm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "parsid/errors.hpp"
#include "parsid/rng.hpp"

namespace parsid {

namespace {

Eigen::VectorXd gaussian_vector(int n, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = sigma * g(rng);
    return v;
}

// Final feasibility restoration on the noise coordinates alone: each noise
// variable appears in exactly one interval and its own box, so the exact
// repair is a scalar clamp.
void repair_noise(const FeasibleSet& set, Eigen::VectorXd& w) {
    for (int i = 0; i < set.layout.chunks; ++i) {
        const Eigen::VectorXd y = set.chunk_output(i, w);
        for (const auto& row : set.intervals) {
            if (row.chunk != i) continue;
            const double lo = std::max(row.lo_m - y(row.row), -set.eps);
            const double hi = std::min(row.hi_m - y(row.row), set.eps);
            double n = w(row.noise_coord);
            if (lo <= hi) {
                n = std::clamp(n, lo, hi);
            } else {
                n = row.lo_m - y(row.row) > set.eps ? set.eps : -set.eps;
            }
            w(row.noise_coord) = n;
        }
    }
}

}  // namespace

SolverState initialize(const FeasibleSet& set, const SolverConfig& cfg,
                       std::mt19937_64& rng) {
    const int nw = set.layout.size();
    const int G = set.layout.groups;
    SolverState st;
    st.w = gaussian_vector(nw, cfg.init_sigma, rng);
    st.s = gaussian_vector(nw, cfg.init_sigma, rng);
    st.lambda1 = gaussian_vector(nw, cfg.init_sigma, rng);
    st.d = gaussian_vector(G, cfg.init_sigma, rng);
    st.t = gaussian_vector(G, cfg.init_sigma, rng);
    st.f = gaussian_vector(G, cfg.init_sigma, rng);
    st.t_mirror = gaussian_vector(G, cfg.init_sigma, rng);
    st.lambda2 = gaussian_vector(G, cfg.init_sigma, rng);
    st.theta = gaussian_vector(G, cfg.init_sigma, rng);
    st.iteration = 0;
    return st;
}

ProjectionResult iterate_once(SolverState& state, const FeasibleSet& set,
                              Projector& projector, const SolverConfig& cfg) {
    const int G = set.layout.groups;
    const double rho = cfg.rho;

    // Cap block: elementwise epigraph projection.
    for (int g = 0; g < G; ++g) {
        const double x_t = state.f(g) - state.lambda2(g) / rho;
        const double t_t = state.t_mirror(g) - state.theta(g) / rho;
        const auto [d, t] = cfg.p.is_l1() ? project_epigraph_l1(x_t, t_t)
                                          : project_epigraph_lp(x_t, t_t, cfg.p);
        state.d(g) = d;
        state.t(g) = t;
    }

    // Copy block: joint projection onto the constraint set.
    ProjectionOptions opts;
    opts.tol = cfg.tol_inner;
    opts.max_iter = cfg.max_inner;
    opts.rho = cfg.inner_rho;
    const Eigen::VectorXd w_hat = state.w + state.lambda1 / rho;
    const Eigen::VectorXd d_hat = state.d + state.lambda2 / rho;
    ProjectionResult pr = projector.project(w_hat, d_hat, opts);
    state.s = pr.w;
    state.f = pr.f;

    // Closed forms for the remaining block.
    state.w = state.s - state.lambda1 / rho;
    state.t_mirror = state.t + (state.theta.array() - 1.0).matrix() / rho;

    // Dual ascent.
    state.lambda1 += rho * (state.w - state.s);
    state.lambda2 += rho * (state.d - state.f);
    state.theta += rho * (state.t - state.t_mirror);
    ++state.iteration;
    return pr;
}

ProjectionResult iterate_once(SolverState& state, const FeasibleSet& set,
                              const SolverConfig& cfg) {
    Projector projector(set, cfg.inner_rho);
    return iterate_once(state, set, projector, cfg);
}

namespace {

IdentificationResult run_solver(const ChunkedDataset& dataset, const PoleGrid& grid,
                                const SolverConfig& cfg) {
    int max_len = 1;
    for (const auto& c : dataset.chunks) max_len = std::max(max_len, c.length());
    const PoleGrid grid_h = grid.with_horizon(max_len);
    const FeasibleSet set = assemble(dataset, grid_h);
    Projector projector(set, cfg.inner_rho);

    std::mt19937_64 rng = make_rng(cfg.seed);
    SolverState st = initialize(set, cfg, rng);

    IdentificationResult res;
    res.mode = cfg.p.is_l1() ? "l1" : "lp";
    res.config = cfg;

    Eigen::VectorXd best_s, best_f;
    double best_df = std::numeric_limits<double>::infinity();

    for (int it = 0; it < cfg.max_outer; ++it) {
        ProjectionResult pr = iterate_once(st, set, projector, cfg);
        if (pr.infeasible) {
            const auto rep = is_feasible(set, st.s, st.f, 10.0 * cfg.tol_inner);
            throw InfeasibleError(
                "constraint set projection stalled (eps too small or "
                "quantizer/data mismatch); worst constraint: " +
                rep.worst_constraint);
        }
        IterateRecord rec;
        rec.iter = st.iteration;
        rec.df_norm = (st.d - st.f).norm();
        rec.df_rel = rec.df_norm / std::max(st.f.norm(), 1e-300);
        rec.ws_norm = (st.w - st.s).norm();
        rec.tz_norm = (st.t - st.t_mirror).norm();
        rec.objective = st.t.sum();
        res.history.push_back(rec);

        if (rec.df_norm < best_df) {
            best_df = rec.df_norm;
            best_s = st.s;
            best_f = st.f;
        }
        if (rec.df_norm <= cfg.stop_tol) {
            res.converged = true;
            break;
        }
    }
    res.iterations = static_cast<int>(res.history.size());
    res.used_best_iterate = !res.converged;
    res.final_df_norm = best_df;

    // Reporting-time polish: re-project the reported copies at a tight
    // tolerance, then restore exact interval membership through the noise.
    ProjectionOptions polish;
    polish.tol = cfg.polish_tol;
    polish.max_iter = cfg.polish_max_iter;
    polish.rho = cfg.inner_rho;
    ProjectionResult pol = projector.project(best_s, best_f, polish);
    Eigen::VectorXd w_sol = pol.w;
    Eigen::VectorXd f_sol = pol.f;
    repair_noise(set, w_sol);

    res.w_solution = w_sol;
    res.caps = f_sol;
    res.system = set.unpack_system(w_sol);
    for (int g = 0; g < set.layout.groups; ++g) {
        if (f_sol(g) > cfg.eps_bar) {
            res.active_groups.push_back(g);
            res.active_poles.push_back(grid_h.groups[g].q);
            res.detected_order += grid_h.groups[g].multiplicity;
        }
    }

    const auto noise = set.unpack_noise(w_sol);
    for (int i = 0; i < set.layout.chunks; ++i) {
        const Eigen::VectorXd y = set.chunk_output(i, w_sol);
        std::vector<double> yv(y.data(), y.data() + y.size());
        std::vector<double> yn(yv);
        for (std::size_t j = 0; j < yn.size(); ++j) yn[j] += noise[i][j];
        std::vector<int> lv(yn.size());
        for (std::size_t j = 0; j < yn.size(); ++j)
            lv[j] = quantize(dataset.quantizer, yn[j]).level_index;
        double z2 = 0.0;
        for (const auto& [k, lvl] : dataset.chunks[i].observed) {
            const double dz = dataset.quantizer.levels[lvl] -
                              dataset.quantizer.levels[lv[k - 1]];
            z2 += dz * dz;
        }
        res.zeta_out.push_back(std::sqrt(z2));
        res.model_output.push_back(std::move(yv));
        res.model_noisy.push_back(std::move(yn));
        res.model_levels.push_back(std::move(lv));
    }
    return res;
}

}  // namespace

IdentificationResult solve(const ChunkedDataset& dataset, const PoleGrid& grid,
                           const SolverConfig& cfg) {
    return run_solver(dataset, grid, cfg);
}

IdentificationResult solve_l1(const ChunkedDataset& dataset, const PoleGrid& grid,
                              const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.p = make_exponent(1, 1);
    return run_solver(dataset, grid, c);
}

void export_history_csv(const IdentificationResult& result, const std::string& path,
                        const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open history csv: " + path);
    out.precision(17);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "iter,df_norm,df_rel,ws_norm,tz_norm,objective\n";
    for (const auto& r : result.history)
        out << r.iter << ',' << r.df_norm << ',' << r.df_rel << ',' << r.ws_norm
            << ',' << r.tz_norm << ',' << r.objective << '\n';
}

}  // namespace parsid
