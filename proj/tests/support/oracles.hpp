#ifndef PARSID_TESTS_ORACLES_HPP_
#define PARSID_TESTS_ORACLES_HPP_

// Independent reference computations for the unit and acceptance suites.
// Everything here deliberately avoids the library's own solution paths:
// brute-force grids, bisection, penalty methods and straight-line formula
// evaluations only.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "parsid/epigraph_prox.hpp"
#include "parsid/feasible_set.hpp"

namespace parsid::oracles {

/// High-precision evaluation of the energy weight (1-r^2)/(1-r^(2N+2)).
long double alpha_reference(long double modulus, int N);

/// Epigraph projection by 1-D grid search over d with t(d) = max(t_tilde,
/// |d|^p), refined by ternary search around the winning cell.
struct EpigraphPoint {
    double d = 0.0, t = 0.0, dist2 = 0.0;
};
EpigraphPoint epigraph_grid_oracle(double x_tilde, double t_tilde, double p,
                                   double grid_step = 1e-4);

/// Real roots by sign-change scan plus bisection (ascending coefficients).
std::vector<double> bisection_roots(const std::vector<double>& coeffs,
                                    double scan_step = 1e-3);

/// Projection onto a FeasibleSet by quadratic-penalty homotopy with
/// accelerated gradient descent; independent of the Projector's splitting.
struct PenaltyProjection {
    Eigen::VectorXd w, f;
    double objective = 0.0;   // ||w - w_hat||^2 + ||f - d_hat||^2
    double worst_violation = 0.0;
};
PenaltyProjection penalty_homotopy_project(const FeasibleSet& set,
                                           const Eigen::VectorXd& w_hat,
                                           const Eigen::VectorXd& d_hat);

/// Squared-distance objective of a candidate pair against the same set.
double projection_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& f,
                            const Eigen::VectorXd& w_hat, const Eigen::VectorXd& d_hat);

/// Tie-corrected Spearman rank correlation.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace parsid::oracles

#endif  // PARSID_TESTS_ORACLES_HPP_
