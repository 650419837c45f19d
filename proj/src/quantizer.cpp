#include "parsid/quantizer.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "parsid/errors.hpp"

namespace parsid {

namespace {

QuantizerSpec from_levels(std::vector<double> levels) {
    QuantizerSpec spec;
    spec.levels = std::move(levels);
    spec.boundaries.reserve(spec.levels.size() - 1);
    for (std::size_t i = 0; i + 1 < spec.levels.size(); ++i)
        spec.boundaries.push_back(0.5 * (spec.levels[i] + spec.levels[i + 1]));
    return spec;
}

}  // namespace

QuantizerSpec make_uniform(int bits, double saturation) {
    if (bits < 1) throw ConfigError("quantizer bits must be >= 1");
    if (!(saturation > 0.0)) throw ConfigError("quantizer saturation must be > 0");
    const int count = 1 << bits;
    const double step = 2.0 * saturation / (count - 1);
    std::vector<double> levels(count);
    for (int i = 0; i < count; ++i) levels[i] = -saturation + i * step;
    QuantizerSpec spec = from_levels(std::move(levels));
    spec.bits = bits;
    spec.saturation = saturation;
    spec.step = step;
    return spec;
}

QuantizerSpec make_uniform_step(int bits, double step) {
    if (bits < 1) throw ConfigError("quantizer bits must be >= 1");
    if (!(step > 0.0)) throw ConfigError("quantizer step must be > 0");
    const int count = 1 << bits;
    const double saturation = 0.5 * step * (count - 1);
    QuantizerSpec spec = make_uniform(bits, saturation);
    spec.step = step;
    return spec;
}

QuantizeResult quantize(const QuantizerSpec& spec, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("quantize: non-finite input");
    // Cells are half-open [b[i-1], b[i]): a boundary value goes to the upper
    // cell, so the index is the number of boundaries <= x.
    const auto it = std::upper_bound(spec.boundaries.begin(), spec.boundaries.end(), x);
    const int idx = static_cast<int>(it - spec.boundaries.begin());
    return {idx, spec.levels[idx]};
}

std::pair<double, double> cell_bounds(const QuantizerSpec& spec, int level_index) {
    const int n = spec.cell_count();
    if (level_index < 0 || level_index >= n)
        throw std::out_of_range("cell_bounds: level index out of range");
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = level_index == 0 ? -inf : spec.boundaries[level_index - 1];
    const double hi = level_index == n - 1 ? inf : spec.boundaries[level_index];
    return {lo, hi};
}

std::string quantizer_to_json(const QuantizerSpec& spec) {
    nlohmann::json j;
    j["boundaries"] = spec.boundaries;
    j["levels"] = spec.levels;
    if (spec.bits) j["bits"] = *spec.bits;
    if (spec.saturation) j["saturation"] = *spec.saturation;
    if (spec.step) j["step"] = *spec.step;
    return j.dump();
}

QuantizerSpec quantizer_from_json(const std::string& text) {
    QuantizerSpec spec;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        spec.boundaries = j.at("boundaries").get<std::vector<double>>();
        spec.levels = j.at("levels").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("quantizer json: ") + e.what());
    }
    if (j.contains("bits")) spec.bits = j["bits"].get<int>();
    if (j.contains("saturation")) spec.saturation = j["saturation"].get<double>();
    if (j.contains("step")) spec.step = j["step"].get<double>();
    if (spec.levels.size() < 2 || spec.boundaries.size() + 1 != spec.levels.size())
        throw IoError("quantizer json: inconsistent boundaries/levels");
    return spec;
}

}  // namespace parsid
