#ifndef PARSID_DATASET_HPP_
#define PARSID_DATASET_HPP_

#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "parsid/quantizer.hpp"

namespace parsid {

/// One maximal interval of continuously available input data. Time restarts
/// at instant 1 in every chunk; `observed` maps surviving 1-based instants to
/// the sensor's level index.
struct Chunk {
    std::vector<double> input;
    std::map<int, int> observed;

    int length() const { return static_cast<int>(input.size()); }
};

/// Fragmented, quantized observations of one experiment.
/// Immutable after construction.
struct ChunkedDataset {
    std::vector<Chunk> chunks;
    QuantizerSpec quantizer;
    double noise_bound_eps = 0.0;

    int chunk_count() const { return static_cast<int>(chunks.size()); }
    int observation_count() const;
};

/// The generating system behind a synthetic dataset. Poles are stored
/// explicitly, conjugates included, and need not lie on any grid.
struct GroundTruth {
    std::vector<std::complex<double>> poles;
    std::vector<std::complex<double>> coeff_a;                    // per pole
    double feedthrough = 0.0;
    std::vector<std::vector<std::complex<double>>> coeff_b;       // [chunk][pole]
    std::vector<std::vector<double>> clean_output;                // y per chunk
    std::vector<std::vector<double>> noise;                       // n per chunk
    std::vector<std::vector<double>> noisy_output;                // y + n per chunk

    int order() const { return static_cast<int>(poles.size()); }
};

struct SyntheticConfig {
    int chunk_count = 4;
    int chunk_length = 50;
    double input_bound = 5.0;
    double noise_bound = 0.25;
    double missing_fraction = 0.10;
    int order = 10;
    double init_coeff_sigma = 1e-2;   // per-chunk zero-input coefficient scale
    int quantizer_bits = 3;
    double quantizer_saturation = 3.0;
};

/// Random stable system: floor(order/2) conjugate pairs plus one real pole
/// when the order is odd. Pole radii are uniform on [0.3, 0.95], pair angles
/// uniform on (0, pi); coefficients have standard-normal parts.
GroundTruth generate_random_system(int order, std::mt19937_64& rng);

/// Synthetic dataset per the random-data experiment defaults: uniform inputs,
/// Gaussian initial-condition coefficients, uniform bounded noise, quantized
/// outputs with a fraction of instants removed uniformly at random.
/// fixed_inputs, when given, replaces the drawn input chunks (multi-system
/// runs apply the same input to every generated system); quantizer_override
/// replaces the uniform quantizer implied by the config.
std::pair<ChunkedDataset, GroundTruth> generate_random_dataset(
    const SyntheticConfig& cfg, std::mt19937_64& rng,
    const std::vector<std::vector<double>>* fixed_inputs = nullptr,
    const QuantizerSpec* quantizer_override = nullptr);

/// Exact output of the ground-truth system (no grid, no scaling).
std::vector<double> simulate_truth_chunk(const GroundTruth& truth, int chunk,
                                         const std::vector<double>& input);

struct Observation {
    std::vector<double> noisy;    // y + n
    std::vector<double> noise;
    std::map<int, int> observed;  // 1-based instant -> level index
};

/// Adds uniform noise on [-eps, eps], quantizes, then removes
/// floor(missing_fraction * n) instants uniformly without replacement.
Observation observe(const std::vector<double>& y, const QuantizerSpec& spec,
                    double eps, double missing_fraction, std::mt19937_64& rng);

/// Reads a whitespace-separated two-column series; '#'/'%' lines skipped.
std::pair<std::vector<double>, std::vector<double>> load_two_column_series(
    const std::string& path);

/// Consecutive non-overlapping windows; the trailing remainder is dropped.
std::vector<std::pair<std::vector<double>, std::vector<double>>> chunkify(
    const std::vector<double>& u, const std::vector<double>& y, int chunk_len);

/// CSV export (chunk, k, u, observed_flag, level_index, level_value).
void export_dataset_csv(const ChunkedDataset& ds, const std::string& path,
                        const std::string& header_comment = "");

}  // namespace parsid

#endif  // PARSID_DATASET_HPP_
