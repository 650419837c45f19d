#ifndef PARSID_POLE_GRID_HPP_
#define PARSID_POLE_GRID_HPP_

#include <complex>
#include <string>
#include <vector>

namespace parsid {

/// A stored candidate pole. Only real-axis poles and upper-half-plane
/// representatives are stored; the conjugate partner of a representative is
/// implied, never stored.
struct GridPoint {
    enum class Kind { RealAxis, UpperHalf };

    std::complex<double> value;  // |value| <= 1
    Kind kind = Kind::RealAxis;
    int group = -1;              // coefficient group this point belongs to
};

/// One coefficient group: a real pole (multiplicity 1) or a conjugate pair
/// (multiplicity 2, represented by its upper-half member).
struct PoleGroup {
    int point = -1;                // index into PoleGrid::points
    std::complex<double> q;        // representative pole value
    int multiplicity = 1;          // 1 real, 2 pair
};

struct GridConfig {
    std::vector<double> radii{0.70, 0.85, 0.95, 1.00};
    // Uniform angular count; ignored when per_radius_counts is nonempty.
    int points_per_radius = 36;
    // Optional per-circle counts (default sizes the dictionary to 146 poles).
    std::vector<int> per_radius_counts{36, 36, 36, 38};
    bool include_real_axis = true;
    // Apply the energy scaling to the zero-state coefficients as well as the
    // zero-input ones (switchable; both behaviors supported downstream).
    bool scale_zero_state = true;
};

/// Finite dictionary of candidate poles covering the unit disk, with the
/// per-group energy-equalizing weights for a given time horizon.
///
/// Immutable after construction; safe for unrestricted concurrent reads.
class PoleGrid {
 public:
    std::vector<GridPoint> points;
    std::vector<PoleGroup> groups;
    int horizon_N = 1;
    std::vector<double> alpha;   // one weight per group, in (0, 1]
    bool scale_zero_state = true;

    int group_count() const { return static_cast<int>(groups.size()); }

    /// Total pole count; a conjugate pair counts as 2.
    int pole_count() const;

    /// Copy of this grid with the horizon (and hence alpha) replaced.
    PoleGrid with_horizon(int N) const;
};

/// Deterministically grids the configured circles. Points with positive
/// imaginary part become pair representatives, real-axis points become real
/// poles, lower-half points are implied conjugates. Duplicates within 1e-12
/// are merged.
PoleGrid build_grid(const GridConfig& cfg);

/// Energy-equalizing weight per group over horizon N:
///   alpha = (1 - |q|^2) / (1 - |q|^(2N+2)),
/// evaluated as the limit 1/(N+1) when |q| = 1.
std::vector<double> scaling_weights(const PoleGrid& grid, int N);

/// Scalar version of the weight formula.
double scaling_weight(double modulus, int N);

/// Writes every pole (conjugates expanded) as "re im" lines.
void dump_grid(const PoleGrid& grid, const std::string& path);

}  // namespace parsid

#endif  // PARSID_POLE_GRID_HPP_
