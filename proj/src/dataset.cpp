#include "parsid/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "parsid/errors.hpp"

namespace parsid {

int ChunkedDataset::observation_count() const {
    int n = 0;
    for (const auto& c : chunks) n += static_cast<int>(c.observed.size());
    return n;
}

GroundTruth generate_random_system(int order, std::mt19937_64& rng) {
    if (order < 1) throw std::invalid_argument("system order must be >= 1");
    GroundTruth truth;
    std::uniform_real_distribution<double> radius(0.3, 0.95);
    std::uniform_real_distribution<double> angle(0.0, std::acos(-1.0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    const int pairs = order / 2;
    for (int p = 0; p < pairs; ++p) {
        double ang = angle(rng);
        while (std::sin(ang) <= 1e-12) ang = angle(rng);
        const double r = radius(rng);
        const std::complex<double> q(r * std::cos(ang), r * std::sin(ang));
        const std::complex<double> a(gauss(rng), gauss(rng));
        truth.poles.push_back(q);
        truth.poles.push_back(std::conj(q));
        truth.coeff_a.push_back(a);
        truth.coeff_a.push_back(std::conj(a));
    }
    if (order % 2 == 1) {
        const double q = radius(rng) * (coin(rng) ? 1.0 : -1.0);
        truth.poles.emplace_back(q, 0.0);
        truth.coeff_a.emplace_back(gauss(rng), 0.0);
    }
    truth.feedthrough = gauss(rng);
    return truth;
}

std::vector<double> simulate_truth_chunk(const GroundTruth& truth, int chunk,
                                         const std::vector<double>& input) {
    if (chunk < 0 || chunk >= static_cast<int>(truth.coeff_b.size()))
        throw std::out_of_range("ground truth: chunk index out of range");
    const int n = static_cast<int>(input.size());
    const int P = truth.order();
    std::vector<std::complex<double>> qpow(P, 1.0);
    std::vector<double> h(n, 0.0), yzi(n, 0.0);
    if (n > 0) h[0] = truth.feedthrough;
    for (int j = 0; j < n; ++j) {
        for (int p = 0; p < P; ++p) {
            if (j + 1 < n) h[j + 1] += (truth.coeff_a[p] * qpow[p]).real();
            yzi[j] += (truth.coeff_b[chunk][p] * qpow[p]).real();
            qpow[p] *= truth.poles[p];
        }
    }
    std::vector<double> y(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double conv = 0.0;
        for (int m = 0; m <= j; ++m) conv += input[m] * h[j - m];
        y[j] = yzi[j] + conv;
    }
    return y;
}

Observation observe(const std::vector<double>& y, const QuantizerSpec& spec,
                    double eps, double missing_fraction, std::mt19937_64& rng) {
    if (eps < 0.0) throw std::invalid_argument("observe: eps must be >= 0");
    if (missing_fraction < 0.0 || missing_fraction >= 1.0)
        throw std::invalid_argument("observe: missing fraction must lie in [0, 1)");
    const int n = static_cast<int>(y.size());
    Observation obs;
    obs.noisy.resize(n);
    obs.noise.resize(n);
    std::uniform_real_distribution<double> unif(-eps, eps);
    for (int j = 0; j < n; ++j) {
        obs.noise[j] = eps > 0.0 ? unif(rng) : 0.0;
        obs.noisy[j] = y[j] + obs.noise[j];
    }
    // Fisher-Yates prefix picks the missing instants without replacement.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const int missing = static_cast<int>(missing_fraction * n);
    for (int j = 0; j < missing; ++j) {
        std::uniform_int_distribution<int> pick(j, n - 1);
        std::swap(idx[j], idx[pick(rng)]);
    }
    std::vector<bool> keep(n, true);
    for (int j = 0; j < missing; ++j) keep[idx[j]] = false;
    for (int j = 0; j < n; ++j)
        if (keep[j]) obs.observed[j + 1] = quantize(spec, obs.noisy[j]).level_index;
    return obs;
}

std::pair<ChunkedDataset, GroundTruth> generate_random_dataset(
    const SyntheticConfig& cfg, std::mt19937_64& rng,
    const std::vector<std::vector<double>>* fixed_inputs,
    const QuantizerSpec* quantizer_override) {
    if (cfg.chunk_count < 1 || cfg.chunk_length < 1)
        throw std::invalid_argument("dataset: chunk count and length must be >= 1");
    if (cfg.input_bound <= 0.0)
        throw std::invalid_argument("dataset: input bound must be > 0");
    if (fixed_inputs && static_cast<int>(fixed_inputs->size()) != cfg.chunk_count)
        throw std::invalid_argument("dataset: fixed input chunk count mismatch");

    GroundTruth truth = generate_random_system(cfg.order, rng);
    std::normal_distribution<double> init(0.0, cfg.init_coeff_sigma);
    truth.coeff_b.resize(cfg.chunk_count);
    for (int i = 0; i < cfg.chunk_count; ++i) {
        auto& b = truth.coeff_b[i];
        for (int p = 0; p < truth.order(); ++p) {
            if (truth.poles[p].imag() > 0.0) {
                b.emplace_back(init(rng), init(rng));
            } else if (truth.poles[p].imag() < 0.0) {
                b.push_back(std::conj(b.back()));
            } else {
                b.emplace_back(init(rng), 0.0);
            }
        }
    }

    ChunkedDataset ds;
    ds.quantizer = quantizer_override
                       ? *quantizer_override
                       : make_uniform(cfg.quantizer_bits, cfg.quantizer_saturation);
    ds.noise_bound_eps = cfg.noise_bound;
    std::uniform_real_distribution<double> input(-cfg.input_bound, cfg.input_bound);
    for (int i = 0; i < cfg.chunk_count; ++i) {
        Chunk c;
        if (fixed_inputs) {
            c.input = (*fixed_inputs)[i];
        } else {
            c.input.resize(cfg.chunk_length);
            for (auto& u : c.input) u = input(rng);
        }
        const auto y = simulate_truth_chunk(truth, i, c.input);
        auto obs = observe(y, ds.quantizer, cfg.noise_bound, cfg.missing_fraction, rng);
        c.observed = std::move(obs.observed);
        truth.clean_output.push_back(y);
        truth.noise.push_back(std::move(obs.noise));
        truth.noisy_output.push_back(std::move(obs.noisy));
        ds.chunks.push_back(std::move(c));
    }
    return {std::move(ds), std::move(truth)};
}

std::pair<std::vector<double>, std::vector<double>> load_two_column_series(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file: " + path);
    std::vector<double> u, y;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == '%') continue;
        std::istringstream ss(line.substr(first));
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b))
            throw IoError("data file " + path + ": line " + std::to_string(lineno) +
                          " needs two numeric columns");
        u.push_back(a);
        y.push_back(b);
    }
    return {std::move(u), std::move(y)};
}

std::vector<std::pair<std::vector<double>, std::vector<double>>> chunkify(
    const std::vector<double>& u, const std::vector<double>& y, int chunk_len) {
    if (chunk_len < 1) throw std::invalid_argument("chunkify: chunk length must be >= 1");
    if (u.size() != y.size())
        throw std::invalid_argument("chunkify: input/output length mismatch");
    const int n = static_cast<int>(u.size());
    if (chunk_len > n)
        throw std::invalid_argument("chunkify: chunk length exceeds series length");
    std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
    for (int start = 0; start + chunk_len <= n; start += chunk_len) {
        out.emplace_back(
            std::vector<double>(u.begin() + start, u.begin() + start + chunk_len),
            std::vector<double>(y.begin() + start, y.begin() + start + chunk_len));
    }
    return out;
}

void export_dataset_csv(const ChunkedDataset& ds, const std::string& path,
                        const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open dataset csv: " + path);
    out.precision(17);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "chunk,k,u,observed_flag,level_index,level_value\n";
    for (int i = 0; i < ds.chunk_count(); ++i) {
        const auto& c = ds.chunks[i];
        for (int j = 0; j < c.length(); ++j) {
            const auto it = c.observed.find(j + 1);
            out << i << ',' << (j + 1) << ',' << c.input[j] << ',';
            if (it == c.observed.end()) {
                out << "0,,\n";
            } else {
                out << "1," << it->second << ',' << ds.quantizer.levels[it->second]
                    << '\n';
            }
        }
    }
}

}  // namespace parsid
