#include "parsid/run_config.hpp"

#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "parsid/errors.hpp"

namespace parsid {

void validate(const RunConfig& cfg) {
    if (cfg.grid.radii.empty()) throw ConfigError("grid.radii: empty");
    for (double r : cfg.grid.radii)
        if (!(r > 0.0) || r > 1.0) throw ConfigError("grid.radii: values must lie in (0, 1]");
    if (!cfg.grid.per_radius_counts.empty() &&
        cfg.grid.per_radius_counts.size() != cfg.grid.radii.size())
        throw ConfigError("grid.per_radius_counts: size must match grid.radii");
    if (cfg.quantizer_bits < 1) throw ConfigError("quantizer.bits: must be >= 1");
    if (cfg.quantizer_step <= 0.0 && cfg.quantizer_saturation <= 0.0)
        throw ConfigError("quantizer.saturation: must be > 0");
    if (cfg.source != "synthetic" && cfg.source != "file")
        throw ConfigError("dataset.source: must be \"synthetic\" or \"file\"");
    if (cfg.source == "file" && cfg.data_path.empty())
        throw ConfigError("dataset.data_path: required for file source");
    if (cfg.chunk_count < 1) throw ConfigError("dataset.chunk_count: must be >= 1");
    if (cfg.chunk_length < 1) throw ConfigError("dataset.chunk_length: must be >= 1");
    if (cfg.noise_bound < 0.0) throw ConfigError("dataset.noise_bound: must be >= 0");
    if (cfg.missing_fraction < 0.0 || cfg.missing_fraction >= 1.0)
        throw ConfigError("dataset.missing_fraction: must lie in [0, 1)");
    if (cfg.order < 1) throw ConfigError("dataset.order: must be >= 1");
    try {
        parse_exponent(cfg.p);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("solver.p: ") + e.what());
    }
    if (cfg.rho <= 0.0) throw ConfigError("solver.rho: must be > 0");
    if (cfg.max_outer < 1) throw ConfigError("solver.max_outer: must be >= 1");
    if (cfg.stop_tol <= 0.0) throw ConfigError("solver.stop_tol: must be > 0");
    if (cfg.eps_bar <= 0.0) throw ConfigError("solver.eps_bar: must be > 0");
    if (cfg.tol_inner <= 0.0) throw ConfigError("solver.tol_inner: must be > 0");
    if (cfg.max_inner < 1) throw ConfigError("solver.max_inner: must be >= 1");
    if (cfg.inner_rho <= 0.0) throw ConfigError("solver.inner_rho: must be > 0");
    if (cfg.init_sigma < 0.0) throw ConfigError("solver.init_sigma: must be >= 0");
    if (cfg.systems_per_order < 1)
        throw ConfigError("experiment.systems_per_order: must be >= 1");
    for (int o : cfg.orders)
        if (o < 1) throw ConfigError("experiment.orders: entries must be >= 1");
    for (std::size_t i = 0; i < cfg.eps_values.size(); ++i) {
        if (!(cfg.eps_values[i] > 0.0))
            throw ConfigError("experiment.eps_values: entries must be > 0");
        if (i > 0 && cfg.eps_values[i] < cfg.eps_values[i - 1])
            throw ConfigError("experiment.eps_values: must be ascending");
    }
    if (cfg.mode != "lp" && cfg.mode != "l1" && cfg.mode != "both")
        throw ConfigError("mode: must be \"lp\", \"l1\" or \"both\"");
    if (cfg.workers < 0) throw ConfigError("workers: must be >= 0");
}

std::string config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["grid"] = {{"radii", cfg.grid.radii},
                 {"points_per_radius", cfg.grid.points_per_radius},
                 {"per_radius_counts", cfg.grid.per_radius_counts},
                 {"include_real_axis", cfg.grid.include_real_axis},
                 {"scale_zero_state", cfg.grid.scale_zero_state}};
    j["quantizer"] = {{"bits", cfg.quantizer_bits},
                      {"saturation", cfg.quantizer_saturation},
                      {"step", cfg.quantizer_step}};
    j["dataset"] = {{"source", cfg.source},
                    {"data_path", cfg.data_path},
                    {"chunk_count", cfg.chunk_count},
                    {"chunk_length", cfg.chunk_length},
                    {"max_chunks", cfg.max_chunks},
                    {"input_bound", cfg.input_bound},
                    {"noise_bound", cfg.noise_bound},
                    {"missing_fraction", cfg.missing_fraction},
                    {"order", cfg.order},
                    {"init_coeff_sigma", cfg.init_coeff_sigma}};
    j["solver"] = {{"p", cfg.p},
                   {"rho", cfg.rho},
                   {"max_outer", cfg.max_outer},
                   {"stop_tol", cfg.stop_tol},
                   {"eps_bar", cfg.eps_bar},
                   {"tol_inner", cfg.tol_inner},
                   {"max_inner", cfg.max_inner},
                   {"inner_rho", cfg.inner_rho},
                   {"init_sigma", cfg.init_sigma}};
    j["experiment"] = {{"orders", cfg.orders},
                       {"systems_per_order", cfg.systems_per_order},
                       {"eps_values", cfg.eps_values}};
    j["seed"] = cfg.seed;
    j["mode"] = cfg.mode;
    j["out"] = cfg.out_dir;
    j["workers"] = resolved_workers(cfg);
    return j.dump();
}

QuantizerSpec make_quantizer(const RunConfig& cfg) {
    if (cfg.quantizer_step > 0.0)
        return make_uniform_step(cfg.quantizer_bits, cfg.quantizer_step);
    return make_uniform(cfg.quantizer_bits, cfg.quantizer_saturation);
}

SolverConfig make_solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.p = parse_exponent(cfg.p);
    sc.rho = cfg.rho;
    sc.max_outer = cfg.max_outer;
    sc.stop_tol = cfg.stop_tol;
    sc.eps_bar = cfg.eps_bar;
    sc.tol_inner = cfg.tol_inner;
    sc.max_inner = cfg.max_inner;
    sc.inner_rho = cfg.inner_rho;
    sc.init_sigma = cfg.init_sigma;
    sc.seed = cfg.seed;
    return sc;
}

SyntheticConfig make_synthetic_config(const RunConfig& cfg) {
    SyntheticConfig sc;
    sc.chunk_count = cfg.chunk_count;
    sc.chunk_length = cfg.chunk_length;
    sc.input_bound = cfg.input_bound;
    sc.noise_bound = cfg.noise_bound;
    sc.missing_fraction = cfg.missing_fraction;
    sc.order = cfg.order;
    sc.init_coeff_sigma = cfg.init_coeff_sigma;
    sc.quantizer_bits = cfg.quantizer_bits;
    sc.quantizer_saturation = cfg.quantizer_saturation;
    return sc;
}

std::vector<double> default_eps_grid(double saturation) {
    // Eight geometric points spanning two decades below the saturation level.
    std::vector<double> eps;
    const double hi = saturation;
    const double lo = saturation / 100.0;
    const int n = 8;
    for (int i = 0; i < n; ++i)
        eps.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return eps;
}

int resolved_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace parsid
