#ifndef PARSID_LTI_SIM_HPP_
#define PARSID_LTI_SIM_HPP_

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "parsid/pole_grid.hpp"

namespace parsid {

/// A system expressed on a pole grid: feedthrough r, one zero-state
/// coefficient per group and one zero-input coefficient per (chunk, group).
/// Real poles carry real coefficients; a pair group's coefficient belongs to
/// the upper-half representative, the conjugate partner's is implied.
struct GriddedSystem {
    double r = 0.0;
    std::vector<std::complex<double>> zero_state_coeffs;                // per group
    std::vector<std::vector<std::complex<double>>> zero_input_coeffs;   // [chunk][group]
};

/// Impulse response h(k): h(0) = r; for k >= 1 a weighted sum of pole powers
/// q^(k-1), conjugate pairs contributing 2*Re(.). The grid's energy weights
/// multiply the zero-state coefficients unless the grid disables that.
double impulse_response(const GriddedSystem& sys, const PoleGrid& grid, int k);

/// Response due to chunk initial conditions at 1-based instant k.
double zero_input_response(const GriddedSystem& sys, const PoleGrid& grid,
                           int chunk, int k);

/// Convolution of the input with the impulse response at 0-based index k.
double zero_state_response(const GriddedSystem& sys, const PoleGrid& grid,
                           const std::vector<double>& input, int k);

/// Full chunk output: zero-input plus zero-state response per sample.
std::vector<double> simulate_chunk(const GriddedSystem& sys, const PoleGrid& grid,
                                   int chunk, const std::vector<double>& input);

/// Real parameterization of one chunk's output map. Column order:
/// r, then per group the zero-state parts (Re, and Im for pairs), then per
/// group the chunk's zero-input parts likewise.
///
/// Immutable after construction; operators for different chunks may be built
/// concurrently.
struct ForwardOperator {
    Eigen::MatrixXd matrix;           // chunk_length x (1 + n + n)
    int chunk = 0;
    std::vector<int> column_group;    // -1 for the r column
    std::vector<bool> column_is_imag; // Im-part flag per column
    int a_cols = 0;                   // real dof of the zero-state block
    int b_cols = 0;                   // real dof of the zero-input block

    int cols() const { return static_cast<int>(matrix.cols()); }
    int rows() const { return static_cast<int>(matrix.rows()); }
};

ForwardOperator forward_operator(const PoleGrid& grid,
                                 const std::vector<double>& input, int chunk);

/// Packs (r, a, b^(chunk)) into the operator's column order.
Eigen::VectorXd pack_chunk_params(const GriddedSystem& sys, const PoleGrid& grid,
                                  int chunk);

/// Writes a simulated series as CSV (k, y, y_zi, y_zs).
void export_series_csv(const GriddedSystem& sys, const PoleGrid& grid, int chunk,
                       const std::vector<double>& input, const std::string& path);

}  // namespace parsid

#endif  // PARSID_LTI_SIM_HPP_
