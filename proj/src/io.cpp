#include "parsid/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "parsid/analysis.hpp"
#include "parsid/errors.hpp"

namespace parsid {

namespace {

nlohmann::json complex_json(const std::complex<double>& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
}

}  // namespace

void write_result_json(const IdentificationResult& result,
                       const ChunkedDataset& dataset, const GroundTruth* truth,
                       const std::string& config_echo, const std::string& path) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_echo.empty() ? "{}" : config_echo);
    j["seed"] = result.config.seed;
    j["mode"] = result.mode;
    j["p"] = std::to_string(result.config.p.u) + "/" + std::to_string(result.config.p.v);
    j["converged"] = result.converged;
    j["used_best_iterate"] = result.used_best_iterate;
    j["iterations"] = result.iterations;
    j["final_df_norm"] = result.final_df_norm;
    j["detected_order"] = result.detected_order;
    j["feedthrough"] = result.system.r;

    nlohmann::json active = nlohmann::json::array();
    for (std::size_t i = 0; i < result.active_groups.size(); ++i) {
        const int g = result.active_groups[i];
        active.push_back({{"group", g},
                          {"pole", complex_json(result.active_poles[i])},
                          {"cap", result.caps(g)},
                          {"coefficient", complex_json(result.system.zero_state_coeffs[g])}});
    }
    j["active_poles"] = active;

    j["zeta_out"] = result.zeta_out;
    if (truth != nullptr) {
        std::vector<double> zeta_in;
        for (std::size_t i = 0; i < result.model_noisy.size(); ++i)
            zeta_in.push_back(
                sensor_input_error(truth->noisy_output[i], result.model_noisy[i]));
        j["zeta_in"] = zeta_in;
    }

    nlohmann::json zi = nlohmann::json::array();
    for (const auto& chunk : result.system.zero_input_coeffs) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : chunk) row.push_back(complex_json(c));
        zi.push_back(row);
    }
    j["zero_input_coefficients"] = zi;
    j["noise_bound_eps"] = dataset.noise_bound_eps;

    write_text(path, j.dump(2) + "\n");
}

void write_reconstruction_csv(const IdentificationResult& result,
                              const ChunkedDataset& dataset,
                              const GroundTruth* truth,
                              const std::string& config_echo,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open reconstruction csv: " + path);
    out.precision(17);
    if (!config_echo.empty()) out << "# " << config_echo << '\n';
    out << "chunk,k,u,observed_flag,obs_level_index,obs_level_value,"
           "y_model,yhat_model,model_level_index,model_level_value";
    if (truth != nullptr) out << ",yhat_true";
    out << '\n';
    for (int i = 0; i < dataset.chunk_count(); ++i) {
        const auto& c = dataset.chunks[i];
        for (int j = 0; j < c.length(); ++j) {
            const auto it = c.observed.find(j + 1);
            out << i << ',' << (j + 1) << ',' << c.input[j] << ','
                << (it != c.observed.end() ? 1 : 0) << ',';
            if (it != c.observed.end())
                out << it->second << ',' << dataset.quantizer.levels[it->second];
            else
                out << ',';
            const int ml = result.model_levels[i][j];
            out << ',' << result.model_output[i][j] << ',' << result.model_noisy[i][j]
                << ',' << ml << ',' << dataset.quantizer.levels[ml];
            if (truth != nullptr) out << ',' << truth->noisy_output[i][j];
            out << '\n';
        }
    }
}

void write_ground_truth_json(const GroundTruth& truth, const std::string& config_echo,
                             const std::string& path) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_echo.empty() ? "{}" : config_echo);
    j["order"] = truth.order();
    j["feedthrough"] = truth.feedthrough;
    nlohmann::json poles = nlohmann::json::array();
    for (std::size_t p = 0; p < truth.poles.size(); ++p)
        poles.push_back({{"pole", complex_json(truth.poles[p])},
                         {"coefficient", complex_json(truth.coeff_a[p])}});
    j["poles"] = poles;
    nlohmann::json b = nlohmann::json::array();
    for (const auto& chunk : truth.coeff_b) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : chunk) row.push_back(complex_json(c));
        b.push_back(row);
    }
    j["zero_input_coefficients"] = b;
    j["clean_output"] = truth.clean_output;
    j["noise"] = truth.noise;
    j["noisy_output"] = truth.noisy_output;
    write_text(path, j.dump(2) + "\n");
}

}  // namespace parsid
