#include "parsid/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace parsid {

int detected_order(const Eigen::VectorXd& f, const PoleGrid& grid, double eps_bar) {
    if (eps_bar <= 0.0) throw std::invalid_argument("detected_order: eps_bar must be > 0");
    if (f.size() != grid.group_count())
        throw std::invalid_argument("detected_order: cap/grid size mismatch");
    int order = 0;
    for (int g = 0; g < grid.group_count(); ++g)
        if (f(g) > eps_bar) order += grid.groups[g].multiplicity;
    return order;
}

double sensor_input_error(const std::vector<double>& y_hat_ref,
                          const std::vector<double>& y_hat_model) {
    if (y_hat_ref.size() != y_hat_model.size())
        throw std::invalid_argument("sensor_input_error: length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < y_hat_ref.size(); ++k) {
        const double d = y_hat_ref[k] - y_hat_model[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double sensor_output_error(const std::vector<double>& z_ref,
                           const std::vector<double>& z_model) {
    if (z_ref.size() != z_model.size())
        throw std::invalid_argument("sensor_output_error: index set mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < z_ref.size(); ++k) {
        const double d = z_ref[k] - z_model[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace parsid
