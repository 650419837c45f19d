#ifndef PARSID_EXPERIMENTS_HPP_
#define PARSID_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "parsid/admm_solver.hpp"
#include "parsid/dataset.hpp"

namespace parsid {

struct OrderStats {
    double min = 0.0, p25 = 0.0, median = 0.0, mean = 0.0, p75 = 0.0, max = 0.0;
    int count = 0;
};

/// Linear-interpolation quantile of the (unsorted) sample.
double quantile(std::vector<double> values, double q);
OrderStats order_stats(const std::vector<int>& orders);

struct MultiSystemCell {
    int original_order = 0;
    int system = 0;
    std::string mode;
    int detected_order = -1;
    bool converged = false;
    std::string status;  // "ok" or the failure reason
};

struct MultiSystemResult {
    std::vector<int> orders;
    int systems_per_order = 0;
    std::vector<MultiSystemCell> cells;

    std::vector<int> detected(int original_order, const std::string& mode) const;
    OrderStats stats(int original_order, const std::string& mode) const;
};

/// For each original order, generates systems driven by one shared input
/// realization, solves both relaxations per system and collects the detected
/// order statistics. Cells run on a bounded worker pool; failures are
/// recorded per cell. Deterministic for a fixed seed.
MultiSystemResult run_multi_system(const std::vector<int>& orders,
                                   int systems_per_order,
                                   const SyntheticConfig& data_cfg,
                                   const GridConfig& grid_cfg,
                                   const SolverConfig& solver_cfg,
                                   std::uint64_t seed, int workers = 1);

struct NoiseSweepRow {
    double eps = 0.0;
    int order_l1 = -1, order_lp = -1;
    double output_error_l1 = 0.0, output_error_lp = 0.0;
    double zeta_out_l1 = 0.0, zeta_out_lp = 0.0;
    bool converged_l1 = false, converged_lp = false;
    std::string status_l1, status_lp;
};

/// Solves both relaxations on one chunk for every noise bound in eps_values.
/// The observations (quantized outputs, fragmentation mask) are fixed across
/// the sweep; only the assumed bound varies. Output errors compare the model
/// output against the given series over the full chunk.
std::vector<NoiseSweepRow> run_noise_sweep(const std::vector<double>& u,
                                           const std::vector<double>& y,
                                           const QuantizerSpec& quantizer,
                                           double missing_fraction,
                                           const std::vector<double>& eps_values,
                                           const GridConfig& grid_cfg,
                                           const SolverConfig& solver_cfg,
                                           std::uint64_t seed, int workers = 1);

void export_multi_system_csv(const MultiSystemResult& result, const std::string& path,
                             const std::string& header_comment = "");
void export_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                            const std::string& path,
                            const std::string& header_comment = "");

}  // namespace parsid

#endif  // PARSID_EXPERIMENTS_HPP_
