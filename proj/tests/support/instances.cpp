#include "support/instances.hpp"

#include <algorithm>
#include <cmath>

#include "parsid/rng.hpp"

namespace parsid::instances {

PoleGrid default_grid() { return build_grid(GridConfig{}); }

std::pair<ChunkedDataset, GroundTruth> default_instance(std::uint64_t seed) {
    SyntheticConfig cfg;  // defaults are the random-data experiment values
    auto rng = make_rng(seed, 0xdefau);
    return generate_random_dataset(cfg, rng);
}

SolverConfig default_solver(std::uint64_t seed, bool l1) {
    SolverConfig cfg;
    if (l1) cfg.p = make_exponent(1, 1);
    cfg.seed = seed;
    return cfg;
}

TinyInstance tiny_instance(std::uint64_t seed) {
    TinyInstance t;
    GridConfig gc;
    gc.radii = {0.5};
    gc.points_per_radius = 3;  // +0.5 and one upper-half point
    gc.per_radius_counts.clear();
    t.grid = build_grid(gc);

    auto rng = make_rng(seed, 0x7141u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> level(0, 3);

    Chunk c;
    c.input.resize(6);
    for (auto& u : c.input) u = unif(rng);
    // Three observed instants with arbitrary levels; the dictionary has more
    // degrees of freedom than constraints, so any pattern is attainable.
    for (int k : {2, 4, 5}) c.observed[k] = level(rng);

    t.dataset.chunks.push_back(std::move(c));
    t.dataset.quantizer = make_uniform(2, 2.0);
    t.dataset.noise_bound_eps = 0.1;
    return t;
}

std::pair<std::vector<double>, std::vector<double>> standin_sweep_series(
    std::uint64_t seed) {
    auto rng = make_rng(seed, 0xa43);
    GroundTruth truth = generate_random_system(8, rng);
    truth.coeff_b.resize(1);
    std::normal_distribution<double> init(0.0, 1e-2);
    for (int p = 0; p < truth.order(); ++p) {
        if (truth.poles[p].imag() > 0.0)
            truth.coeff_b[0].emplace_back(init(rng), init(rng));
        else if (truth.poles[p].imag() < 0.0)
            truth.coeff_b[0].push_back(std::conj(truth.coeff_b[0].back()));
        else
            truth.coeff_b[0].emplace_back(init(rng), 0.0);
    }
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    std::vector<double> u(50);
    for (auto& x : u) x = unif(rng);
    auto y = simulate_truth_chunk(truth, 0, u);
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    // Scale input and state so the output just reaches the 0.7 saturation.
    const double s = peak > 0.0 ? 0.7 / peak : 1.0;
    for (auto& x : u) x *= s;
    for (auto& v : y) v *= s;
    return {std::move(u), std::move(y)};
}

}  // namespace parsid::instances
