#include "parsid/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "parsid/analysis.hpp"
#include "parsid/errors.hpp"
#include "parsid/rng.hpp"

namespace parsid {

namespace {

void run_jobs(int n_jobs, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n_jobs));
    if (workers == 1) {
        for (int j = 0; j < n_jobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (int j = next.fetch_add(1); j < n_jobs; j = next.fetch_add(1)) fn(j);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double h = q * (static_cast<double>(values.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

OrderStats order_stats(const std::vector<int>& orders) {
    OrderStats s;
    s.count = static_cast<int>(orders.size());
    if (orders.empty()) return s;
    std::vector<double> v(orders.begin(), orders.end());
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.p25 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.p75 = quantile(v, 0.75);
    s.mean = 0.0;
    for (double x : v) s.mean += x;
    s.mean /= s.count;
    return s;
}

std::vector<int> MultiSystemResult::detected(int original_order,
                                             const std::string& mode) const {
    std::vector<int> out;
    for (const auto& c : cells)
        if (c.original_order == original_order && c.mode == mode && c.detected_order >= 0)
            out.push_back(c.detected_order);
    return out;
}

OrderStats MultiSystemResult::stats(int original_order, const std::string& mode) const {
    return order_stats(detected(original_order, mode));
}

MultiSystemResult run_multi_system(const std::vector<int>& orders,
                                   int systems_per_order,
                                   const SyntheticConfig& data_cfg,
                                   const GridConfig& grid_cfg,
                                   const SolverConfig& solver_cfg,
                                   std::uint64_t seed, int workers) {
    if (systems_per_order < 1)
        throw std::invalid_argument("run_multi_system: systems_per_order must be >= 1");

    MultiSystemResult result;
    result.orders = orders;
    result.systems_per_order = systems_per_order;
    result.cells.resize(orders.size() * systems_per_order * 2);

    // One input realization shared by every system.
    auto input_rng = make_rng(seed, 0x1b5u);
    std::uniform_real_distribution<double> input(-data_cfg.input_bound,
                                                 data_cfg.input_bound);
    std::vector<std::vector<double>> inputs(data_cfg.chunk_count);
    for (auto& chunk : inputs) {
        chunk.resize(data_cfg.chunk_length);
        for (auto& x : chunk) x = input(input_rng);
    }

    const PoleGrid grid = build_grid(grid_cfg);
    const int n_jobs = static_cast<int>(orders.size()) * systems_per_order;

    run_jobs(n_jobs, workers, [&](int job) {
        const int oi = job / systems_per_order;
        const int si = job % systems_per_order;
        SyntheticConfig cfg = data_cfg;
        cfg.order = orders[oi];
        auto rng = make_rng(seed, 0xda7au, oi, si);
        ChunkedDataset ds;
        GroundTruth truth;
        std::tie(ds, truth) = generate_random_dataset(cfg, rng, &inputs);

        for (int m = 0; m < 2; ++m) {
            MultiSystemCell cell;
            cell.original_order = orders[oi];
            cell.system = si;
            cell.mode = m == 0 ? "lp" : "l1";
            SolverConfig sc = solver_cfg;
            sc.seed = mix_seed(seed ^ mix_seed(0x50f7u + job * 2 + m));
            try {
                const auto res = m == 0 ? solve(ds, grid, sc) : solve_l1(ds, grid, sc);
                cell.detected_order = res.detected_order;
                cell.converged = res.converged;
                cell.status = "ok";
            } catch (const std::exception& e) {
                cell.status = e.what();
            }
            result.cells[job * 2 + m] = std::move(cell);
        }
    });
    return result;
}

std::vector<NoiseSweepRow> run_noise_sweep(const std::vector<double>& u,
                                           const std::vector<double>& y,
                                           const QuantizerSpec& quantizer,
                                           double missing_fraction,
                                           const std::vector<double>& eps_values,
                                           const GridConfig& grid_cfg,
                                           const SolverConfig& solver_cfg,
                                           std::uint64_t seed, int workers) {
    if (eps_values.empty())
        throw std::invalid_argument("run_noise_sweep: eps list is empty");
    for (std::size_t i = 0; i + 1 < eps_values.size(); ++i)
        if (!(eps_values[i] > 0.0) || eps_values[i] > eps_values[i + 1])
            throw std::invalid_argument("run_noise_sweep: eps values must be positive ascending");

    // Observations fixed across the sweep: quantize the series as-is and drop
    // a fraction of the instants; eps only widens the assumed noise range.
    auto mask_rng = make_rng(seed, 0x0b5e7ed);
    const Observation obs = observe(y, quantizer, 0.0, missing_fraction, mask_rng);

    Chunk chunk;
    chunk.input = u;
    chunk.observed = obs.observed;

    const PoleGrid grid = build_grid(grid_cfg);
    std::vector<NoiseSweepRow> rows(eps_values.size());

    run_jobs(static_cast<int>(eps_values.size()), workers, [&](int j) {
        NoiseSweepRow row;
        row.eps = eps_values[j];
        ChunkedDataset ds;
        ds.chunks.push_back(chunk);
        ds.quantizer = quantizer;
        ds.noise_bound_eps = row.eps;
        for (int m = 0; m < 2; ++m) {
            SolverConfig sc = solver_cfg;
            sc.seed = mix_seed(seed ^ mix_seed(0x57eeu + j * 2 + m));
            std::string status = "ok";
            try {
                const auto res = m == 0 ? solve(ds, grid, sc) : solve_l1(ds, grid, sc);
                const double err = sensor_input_error(y, res.model_output[0]);
                if (m == 0) {
                    row.order_lp = res.detected_order;
                    row.output_error_lp = err;
                    row.zeta_out_lp = res.zeta_out[0];
                    row.converged_lp = res.converged;
                } else {
                    row.order_l1 = res.detected_order;
                    row.output_error_l1 = err;
                    row.zeta_out_l1 = res.zeta_out[0];
                    row.converged_l1 = res.converged;
                }
            } catch (const std::exception& e) {
                status = e.what();
            }
            (m == 0 ? row.status_lp : row.status_l1) = status;
        }
        rows[j] = std::move(row);
    });
    return rows;
}

void export_multi_system_csv(const MultiSystemResult& result, const std::string& path,
                             const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open multi-system csv: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "order,mode,count,min,p25,median,mean,p75,max\n";
    for (int order : result.orders) {
        for (const std::string mode : {"lp", "l1"}) {
            const auto s = result.stats(order, mode);
            out << order << ',' << mode << ',' << s.count << ',' << s.min << ','
                << s.p25 << ',' << s.median << ',' << s.mean << ',' << s.p75 << ','
                << s.max << '\n';
        }
    }
    out << "# raw cells: order,system,mode,detected,converged,status\n";
    for (const auto& c : result.cells)
        out << "# " << c.original_order << ',' << c.system << ',' << c.mode << ','
            << c.detected_order << ',' << (c.converged ? 1 : 0) << ',' << c.status
            << '\n';
}

void export_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                            const std::string& path,
                            const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open noise-sweep csv: " + path);
    out.precision(17);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "eps,order_lp,order_l1,output_error_lp,output_error_l1,"
           "zeta_out_lp,zeta_out_l1,converged_lp,converged_l1,status_lp,status_l1\n";
    for (const auto& r : rows)
        out << r.eps << ',' << r.order_lp << ',' << r.order_l1 << ','
            << r.output_error_lp << ',' << r.output_error_l1 << ',' << r.zeta_out_lp
            << ',' << r.zeta_out_l1 << ',' << (r.converged_lp ? 1 : 0) << ','
            << (r.converged_l1 ? 1 : 0) << ',' << r.status_lp << ',' << r.status_l1
            << '\n';
}

}  // namespace parsid
