// parsid: parsimonious LTI identification from fragmented quantized outputs.
//
// Subcommands:
//   simulate    write a synthetic dataset (CSV) and its ground truth (JSON)
//   identify    run the lp / l1 identification on a dataset
//   experiment  multi_system order statistics or the noise-bound sweep
//
// All parameters load from a nested key-value config file (--config); command
// line flags override file values. Every output embeds the resolved config.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "parsid/errors.hpp"
#include "parsid/experiments.hpp"
#include "parsid/io.hpp"
#include "parsid/rng.hpp"
#include "parsid/run_config.hpp"

namespace {

using namespace parsid;

struct BuiltDataset {
    ChunkedDataset ds;
    std::optional<GroundTruth> truth;
    std::vector<std::vector<double>> raw_output;  // file source: y per chunk
};

BuiltDataset build_dataset(const RunConfig& cfg) {
    BuiltDataset built;
    if (cfg.source == "synthetic") {
        auto rng = make_rng(cfg.seed, 0xda7a5e7u);
        const QuantizerSpec spec = make_quantizer(cfg);
        auto [ds, truth] =
            generate_random_dataset(make_synthetic_config(cfg), rng, nullptr, &spec);
        built.ds = std::move(ds);
        built.truth = std::move(truth);
        for (const auto& y : built.truth->clean_output) built.raw_output.push_back(y);
    } else {
        const auto [u, y] = load_two_column_series(cfg.data_path);
        auto chunks = chunkify(u, y, cfg.chunk_length);
        if (cfg.max_chunks > 0 && static_cast<int>(chunks.size()) > cfg.max_chunks)
            chunks.resize(cfg.max_chunks);
        built.ds.quantizer = make_quantizer(cfg);
        built.ds.noise_bound_eps = cfg.noise_bound;
        auto rng = make_rng(cfg.seed, 0xf11eu);
        for (auto& [cu, cy] : chunks) {
            // Recorded data is what the sensor saw; the noise bound is the
            // solver's assumption, so no synthetic noise is added here.
            Chunk c;
            c.input = std::move(cu);
            c.observed =
                observe(cy, built.ds.quantizer, 0.0, cfg.missing_fraction, rng).observed;
            built.ds.chunks.push_back(std::move(c));
            built.raw_output.push_back(std::move(cy));
        }
    }
    return built;
}

std::vector<std::string> requested_modes(const RunConfig& cfg) {
    if (cfg.mode == "both") return {"lp", "l1"};
    return {cfg.mode};
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.out_dir) / name;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto built = build_dataset(cfg);
    const std::string echo = config_json(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    export_dataset_csv(built.ds, out_path(cfg, "dataset.csv").string(), echo);
    dump_grid(build_grid(cfg.grid), out_path(cfg, "grid.txt").string());
    if (built.truth)
        write_ground_truth_json(*built.truth, echo,
                                out_path(cfg, "ground_truth.json").string());
    std::cout << "wrote " << out_path(cfg, "dataset.csv").string() << "\n";
    return 0;
}

int cmd_identify(const RunConfig& cfg) {
    const auto built = build_dataset(cfg);
    const PoleGrid grid = build_grid(cfg.grid);
    const std::string echo = config_json(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    dump_grid(grid, out_path(cfg, "grid.txt").string());

    int exit_code = 0;
    for (const auto& mode : requested_modes(cfg)) {
        SolverConfig sc = make_solver_config(cfg);
        try {
            const IdentificationResult res = mode == "l1" ? solve_l1(built.ds, grid, sc)
                                                          : solve(built.ds, grid, sc);
            const GroundTruth* truth = built.truth ? &*built.truth : nullptr;
            write_result_json(res, built.ds, truth, echo,
                              out_path(cfg, "result_" + mode + ".json").string());
            export_history_csv(res, out_path(cfg, "history_" + mode + ".csv").string(),
                               echo);
            write_reconstruction_csv(
                res, built.ds, truth, echo,
                out_path(cfg, "reconstruction_" + mode + ".csv").string());
            std::cout << mode << ": detected order " << res.detected_order
                      << (res.converged ? "" : " (best iterate)") << "\n";
        } catch (const InfeasibleError& e) {
            std::cerr << "infeasible (" << mode << "): " << e.what() << "\n";
            exit_code = 2;
        }
    }
    return exit_code;
}

int cmd_experiment(const RunConfig& cfg, const std::string& which) {
    const std::string echo = config_json(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const int workers = resolved_workers(cfg);

    if (which == "multi_system") {
        const auto result =
            run_multi_system(cfg.orders, cfg.systems_per_order, make_synthetic_config(cfg),
                             cfg.grid, make_solver_config(cfg), cfg.seed, workers);
        export_multi_system_csv(result, out_path(cfg, "multi_system.csv").string(), echo);
        int failures = 0;
        for (const auto& c : result.cells)
            if (c.status != "ok") {
                ++failures;
                std::cerr << "cell failed (order " << c.original_order << ", system "
                          << c.system << ", " << c.mode << "): " << c.status << "\n";
            }
        std::cout << "wrote " << out_path(cfg, "multi_system.csv").string() << "\n";
        return failures == 0 ? 0 : 2;
    }
    if (which == "noise_sweep") {
        std::vector<double> u, y;
        if (cfg.source == "file") {
            const auto [fu, fy] = load_two_column_series(cfg.data_path);
            const auto chunks = chunkify(fu, fy, cfg.chunk_length);
            u = chunks.front().first;
            y = chunks.front().second;
        } else {
            auto rng = make_rng(cfg.seed, 0x5beeeu);
            SyntheticConfig sc = make_synthetic_config(cfg);
            sc.chunk_count = 1;
            sc.noise_bound = 0.0;
            sc.missing_fraction = 0.0;
            const QuantizerSpec spec = make_quantizer(cfg);
            auto [ds, truth] = generate_random_dataset(sc, rng, nullptr, &spec);
            u = ds.chunks[0].input;
            y = truth.clean_output[0];
        }
        const auto eps = cfg.eps_values.empty()
                             ? default_eps_grid(make_quantizer(cfg).saturation.value_or(1.0))
                             : cfg.eps_values;
        const auto rows =
            run_noise_sweep(u, y, make_quantizer(cfg), cfg.missing_fraction, eps,
                            cfg.grid, make_solver_config(cfg), cfg.seed, workers);
        export_noise_sweep_csv(rows, out_path(cfg, "noise_sweep.csv").string(), echo);
        int failures = 0;
        for (const auto& r : rows) {
            if (r.status_lp != "ok") ++failures;
            if (r.status_l1 != "ok") ++failures;
        }
        std::cout << "wrote " << out_path(cfg, "noise_sweep.csv").string() << "\n";
        return failures == 0 ? 0 : 2;
    }
    throw ConfigError("experiment: unknown kind \"" + which +
                      "\" (expected multi_system or noise_sweep)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parsimonious LTI identification from fragmented quantized outputs"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.set_config("--config", "", "nested key-value config file");
    app.add_option("--seed", cfg.seed, "base seed for every random stream");
    app.add_option("--mode", cfg.mode, "lp, l1 or both");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--workers", cfg.workers, "worker pool size (0 = hardware)");

    app.add_option("--grid.radii", cfg.grid.radii)->delimiter(',');
    app.add_option("--grid.points_per_radius", cfg.grid.points_per_radius);
    app.add_option("--grid.per_radius_counts", cfg.grid.per_radius_counts)->delimiter(',');
    app.add_option("--grid.include_real_axis", cfg.grid.include_real_axis);
    app.add_option("--grid.scale_zero_state", cfg.grid.scale_zero_state);

    app.add_option("--quantizer.bits", cfg.quantizer_bits);
    app.add_option("--quantizer.saturation", cfg.quantizer_saturation);
    app.add_option("--quantizer.step", cfg.quantizer_step);

    app.add_option("--dataset.source", cfg.source);
    app.add_option("--dataset.data_path", cfg.data_path);
    app.add_option("--dataset.chunk_count", cfg.chunk_count);
    app.add_option("--dataset.chunk_length", cfg.chunk_length);
    app.add_option("--dataset.max_chunks", cfg.max_chunks);
    app.add_option("--dataset.input_bound", cfg.input_bound);
    app.add_option("--dataset.noise_bound", cfg.noise_bound);
    app.add_option("--dataset.missing_fraction", cfg.missing_fraction);
    app.add_option("--dataset.order", cfg.order);
    app.add_option("--dataset.init_coeff_sigma", cfg.init_coeff_sigma);

    app.add_option("--solver.p", cfg.p);
    app.add_option("--solver.rho", cfg.rho);
    app.add_option("--solver.max_outer", cfg.max_outer);
    app.add_option("--solver.stop_tol", cfg.stop_tol);
    app.add_option("--solver.eps_bar", cfg.eps_bar);
    app.add_option("--solver.tol_inner", cfg.tol_inner);
    app.add_option("--solver.max_inner", cfg.max_inner);
    app.add_option("--solver.inner_rho", cfg.inner_rho);
    app.add_option("--solver.init_sigma", cfg.init_sigma);

    app.add_option("--experiment.orders", cfg.orders)->delimiter(',');
    app.add_option("--experiment.systems_per_order", cfg.systems_per_order);
    app.add_option("--experiment.eps_values", cfg.eps_values)->delimiter(',');

    auto* sim = app.add_subcommand("simulate", "write a synthetic dataset");
    auto* ident = app.add_subcommand("identify", "run the identification");
    auto* exp = app.add_subcommand("experiment", "run a batch experiment");
    std::string which;
    exp->add_option("kind", which, "multi_system or noise_sweep")->required();
    for (auto* sub : {sim, ident, exp}) sub->fallthrough();

    try {
        app.parse(argc, argv);
        validate(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (ident->parsed()) return cmd_identify(cfg);
        return cmd_experiment(cfg, which);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
