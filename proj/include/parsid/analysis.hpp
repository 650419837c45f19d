#ifndef PARSID_ANALYSIS_HPP_
#define PARSID_ANALYSIS_HPP_

#include <Eigen/Dense>
#include <vector>

#include "parsid/pole_grid.hpp"

namespace parsid {

/// Pole count of the groups whose cap exceeds eps_bar; pairs count 2.
int detected_order(const Eigen::VectorXd& f, const PoleGrid& grid, double eps_bar);

/// Root-sum-square discrepancy between the reference noisy output and the
/// model's reconstruction over a full horizon.
double sensor_input_error(const std::vector<double>& y_hat_ref,
                          const std::vector<double>& y_hat_model);

/// Root-sum-square discrepancy between observed and model level values over
/// the same observed index set.
double sensor_output_error(const std::vector<double>& z_ref,
                           const std::vector<double>& z_model);

}  // namespace parsid

#endif  // PARSID_ANALYSIS_HPP_
