#include "parsid/pole_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "parsid/errors.hpp"

namespace parsid {

namespace {

constexpr double kMergeTol = 1e-12;

bool near_duplicate(const std::vector<GridPoint>& pts, std::complex<double> z) {
    return std::any_of(pts.begin(), pts.end(), [&](const GridPoint& p) {
        return std::abs(p.value - z) <= kMergeTol;
    });
}

}  // namespace

int PoleGrid::pole_count() const {
    int n = 0;
    for (const auto& g : groups) n += g.multiplicity;
    return n;
}

PoleGrid PoleGrid::with_horizon(int N) const {
    if (N < 1) throw ConfigError("pole grid horizon must be >= 1");
    PoleGrid out = *this;
    out.horizon_N = N;
    out.alpha = scaling_weights(*this, N);
    return out;
}

PoleGrid build_grid(const GridConfig& cfg) {
    if (cfg.radii.empty()) throw ConfigError("grid config: radii list is empty");
    for (double r : cfg.radii) {
        if (!(r > 0.0) || r > 1.0)
            throw ConfigError("grid config: radius must lie in (0, 1]");
    }
    std::vector<int> counts = cfg.per_radius_counts;
    if (counts.empty()) {
        counts.assign(cfg.radii.size(), cfg.points_per_radius);
    }
    if (counts.size() != cfg.radii.size())
        throw ConfigError("grid config: per_radius_counts size must match radii");
    for (int c : counts) {
        if (c < 2) throw ConfigError("grid config: points per radius must be >= 2");
    }

    PoleGrid grid;
    grid.scale_zero_state = cfg.scale_zero_state;
    const double pi = std::acos(-1.0);

    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        const double r = cfg.radii[ri];
        const int P = counts[ri];
        for (int t = 0; t < P; ++t) {
            // Classify by index so angle 0 and pi are exact real-axis hits.
            const bool on_pos_axis = (t == 0);
            const bool on_neg_axis = (2 * t == P);
            if (2 * t > P) continue;  // lower half: implied conjugate
            std::complex<double> z;
            GridPoint::Kind kind;
            if (on_pos_axis || on_neg_axis) {
                if (!cfg.include_real_axis) continue;
                z = {on_pos_axis ? r : -r, 0.0};
                kind = GridPoint::Kind::RealAxis;
            } else {
                const double ang = 2.0 * pi * t / P;
                z = {r * std::cos(ang), r * std::sin(ang)};
                kind = GridPoint::Kind::UpperHalf;
            }
            if (near_duplicate(grid.points, z)) continue;
            GridPoint p;
            p.value = z;
            p.kind = kind;
            p.group = static_cast<int>(grid.groups.size());
            grid.points.push_back(p);
            grid.groups.push_back(PoleGroup{
                static_cast<int>(grid.points.size()) - 1, z,
                kind == GridPoint::Kind::RealAxis ? 1 : 2});
        }
    }
    if (grid.groups.empty()) throw ConfigError("grid config produced no poles");
    grid.horizon_N = 1;
    grid.alpha = scaling_weights(grid, 1);
    return grid;
}

double scaling_weight(double modulus, int N) {
    const double rho2 = std::min(modulus * modulus, 1.0);
    // Removable singularity at |q| = 1; snapping below 1e-12 keeps the
    // evaluation within ~1e-12 of the exact value while avoiding the
    // cancellation-dominated zone.
    if (1.0 - rho2 < 1e-12) return 1.0 / (N + 1);
    return (1.0 - rho2) / (1.0 - std::pow(rho2, N + 1));
}

std::vector<double> scaling_weights(const PoleGrid& grid, int N) {
    if (N < 1) throw ConfigError("scaling horizon must be >= 1");
    std::vector<double> a;
    a.reserve(grid.groups.size());
    for (const auto& g : grid.groups) a.push_back(scaling_weight(std::abs(g.q), N));
    return a;
}

void dump_grid(const PoleGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open grid dump file: " + path);
    out.precision(17);
    for (const auto& g : grid.groups) {
        out << g.q.real() << ' ' << g.q.imag() << '\n';
        if (g.multiplicity == 2) out << g.q.real() << ' ' << -g.q.imag() << '\n';
    }
}

}  // namespace parsid
