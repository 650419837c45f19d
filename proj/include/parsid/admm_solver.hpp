#ifndef PARSID_ADMM_SOLVER_HPP_
#define PARSID_ADMM_SOLVER_HPP_

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "parsid/epigraph_prox.hpp"
#include "parsid/feasible_set.hpp"

namespace parsid {

struct SolverConfig {
    PExponent p{1, 2};
    double rho = 20.0;
    int max_outer = 100;
    double stop_tol = 1e-2;        // on ||d - f||_2
    double eps_bar = 1e-3;         // cap below which a group counts as zero
    double tol_inner = 1e-6;
    int max_inner = 2000;
    double inner_rho = 1.0;
    double init_sigma = 0.1;
    std::uint64_t seed = 1;
    double polish_tol = 1e-8;      // reporting-time projection tolerance
    int polish_max_iter = 50000;
};

/// All blocks of the splitting. w stacks (r, a, B, noise); s mirrors w inside
/// the constraint set; d caps the coefficient groups with f its in-set copy;
/// (t, t_mirror) carry the epigraph values. t_mirror is the algorithm
/// variable named z in the usual presentation, renamed here because z is the
/// sensor output.
struct SolverState {
    Eigen::VectorXd w, s, lambda1;                       // parameter-sized
    Eigen::VectorXd d, t, f, t_mirror, lambda2, theta;   // group-sized
    int iteration = 0;
};

struct IterateRecord {
    int iter = 0;
    double df_norm = 0.0;     // ||d - f||_2
    double df_rel = 0.0;      // ||d - f||_2 / ||f||_2
    double ws_norm = 0.0;     // ||w - s||_2
    double tz_norm = 0.0;     // ||t - t_mirror||_2
    double objective = 0.0;   // sum of t
};

struct IdentificationResult {
    GriddedSystem system;
    Eigen::VectorXd w_solution;   // feasible parameter copy, noise included
    Eigen::VectorXd caps;         // feasible cap copy
    std::vector<int> active_groups;
    std::vector<std::complex<double>> active_poles;
    int detected_order = 0;
    bool converged = false;
    bool used_best_iterate = false;  // iteration budget hit; best ||d-f|| reported
    int iterations = 0;
    double final_df_norm = 0.0;
    std::vector<IterateRecord> history;
    std::vector<double> zeta_out;                    // per chunk, observed instants
    std::vector<std::vector<double>> model_output;   // y per chunk
    std::vector<std::vector<double>> model_noisy;    // y + n per chunk
    std::vector<std::vector<int>> model_levels;      // re-quantized model output
    std::string mode;                                // "lp" or "l1"
    SolverConfig config;
};

/// Gaussian initialization of every block, deterministic given the stream.
SolverState initialize(const FeasibleSet& set, const SolverConfig& cfg,
                       std::mt19937_64& rng);

/// One pass of the three-block scheme: epigraph projection of the caps,
/// joint projection of the copies onto the constraint set, the closed-form
/// (w, t_mirror) updates, then dual ascent. Returns the projection status.
ProjectionResult iterate_once(SolverState& state, const FeasibleSet& set,
                              Projector& projector, const SolverConfig& cfg);

/// Convenience overload with a cold projector (test paths).
ProjectionResult iterate_once(SolverState& state, const FeasibleSet& set,
                              const SolverConfig& cfg);

/// Full identification run; stops on ||d - f||_2 <= stop_tol or the iteration
/// budget, reporting the best-residual iterate in the latter case. The grid's
/// energy horizon is set to the longest chunk before assembly.
IdentificationResult solve(const ChunkedDataset& dataset, const PoleGrid& grid,
                           const SolverConfig& cfg);

/// The convex baseline: same machinery with p = 1.
IdentificationResult solve_l1(const ChunkedDataset& dataset, const PoleGrid& grid,
                              const SolverConfig& cfg);

/// Writes the iterate history as CSV.
void export_history_csv(const IdentificationResult& result, const std::string& path,
                        const std::string& header_comment = "");

}  // namespace parsid

#endif  // PARSID_ADMM_SOLVER_HPP_
