#ifndef PARSID_QUANTIZER_HPP_
#define PARSID_QUANTIZER_HPP_

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace parsid {

/// A general scalar quantizer: disjoint, exhaustive half-open cells
/// [boundaries[i-1], boundaries[i]) with one output level per cell.
/// Immutable after construction.
struct QuantizerSpec {
    std::vector<double> boundaries;  // strictly increasing, size = levels-1
    std::vector<double> levels;      // strictly increasing

    // Set for quantizers built by make_uniform.
    std::optional<int> bits;
    std::optional<double> saturation;
    std::optional<double> step;

    int cell_count() const { return static_cast<int>(levels.size()); }
};

struct QuantizeResult {
    int level_index = 0;
    double level_value = 0.0;
};

/// Symmetric uniform quantizer: 2^m levels equally spaced on
/// [-saturation, +saturation], step 2*saturation/(2^m - 1), cell boundaries at
/// the midpoints between consecutive levels.
QuantizerSpec make_uniform(int bits, double saturation);

/// Uniform symmetric quantizer with an explicitly chosen step.
QuantizerSpec make_uniform_step(int bits, double step);

/// Cell lookup; values on a boundary belong to the upper cell.
QuantizeResult quantize(const QuantizerSpec& spec, double x);

/// Half-open interval [lo, hi) whose image under quantize is exactly
/// level_index. The first cell has lo = -inf, the last hi = +inf.
std::pair<double, double> cell_bounds(const QuantizerSpec& spec, int level_index);

/// Serialization for experiment configs.
std::string quantizer_to_json(const QuantizerSpec& spec);
QuantizerSpec quantizer_from_json(const std::string& text);

}  // namespace parsid

#endif  // PARSID_QUANTIZER_HPP_
