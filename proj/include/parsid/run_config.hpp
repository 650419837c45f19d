#ifndef PARSID_RUN_CONFIG_HPP_
#define PARSID_RUN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "parsid/admm_solver.hpp"
#include "parsid/dataset.hpp"
#include "parsid/pole_grid.hpp"
#include "parsid/quantizer.hpp"

namespace parsid {

/// Everything a batch run needs, file-loadable and echoed into every output
/// for provenance. Field names follow the config file keys (section.key).
struct RunConfig {
    GridConfig grid;

    // [quantizer]
    int quantizer_bits = 3;
    double quantizer_saturation = 3.0;
    double quantizer_step = 0.0;  // > 0: explicit step, overrides saturation

    // [dataset]
    std::string source = "synthetic";  // "synthetic" | "file"
    std::string data_path;
    int chunk_count = 4;
    int chunk_length = 50;
    int max_chunks = 0;  // file source: keep only the first K chunks (0 = all)
    double input_bound = 5.0;
    double noise_bound = 0.25;
    double missing_fraction = 0.10;
    int order = 10;
    double init_coeff_sigma = 1e-2;

    // [solver]
    std::string p = "1/2";
    double rho = 20.0;
    int max_outer = 100;
    double stop_tol = 1e-2;
    double eps_bar = 1e-3;
    double tol_inner = 1e-6;
    int max_inner = 2000;
    double inner_rho = 1.0;
    double init_sigma = 0.1;

    // [experiment]
    std::vector<int> orders{2, 4, 6, 8, 10};
    int systems_per_order = 50;
    std::vector<double> eps_values;  // empty: geometric default grid

    // top level
    std::uint64_t seed = 1;
    std::string mode = "both";  // "lp" | "l1" | "both"
    std::string out_dir = "out";
    int workers = 0;  // 0 = hardware concurrency
};

/// Throws ConfigError naming the offending field path.
void validate(const RunConfig& cfg);

/// Full resolved-config echo as a JSON string.
std::string config_json(const RunConfig& cfg);

QuantizerSpec make_quantizer(const RunConfig& cfg);
SolverConfig make_solver_config(const RunConfig& cfg);
SyntheticConfig make_synthetic_config(const RunConfig& cfg);

/// Geometric default sweep grid over (saturation/100, saturation].
std::vector<double> default_eps_grid(double saturation);

int resolved_workers(const RunConfig& cfg);

}  // namespace parsid

#endif  // PARSID_RUN_CONFIG_HPP_
