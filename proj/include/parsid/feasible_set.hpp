#ifndef PARSID_FEASIBLE_SET_HPP_
#define PARSID_FEASIBLE_SET_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <string>
#include <vector>

#include "parsid/dataset.hpp"
#include "parsid/lti_sim.hpp"
#include "parsid/pole_grid.hpp"

namespace parsid {

/// Layout of the stacked parameter vector
///   w = [ r | zero-state parts | zero-input parts (chunk-major) | noise ].
/// Coefficient parts are group-major with (Re, Im) for pair groups.
struct ParamLayout {
    int n_dof = 0;   // total pole count (pairs count 2)
    int chunks = 0;  // T
    int groups = 0;  // G
    std::vector<int> group_offset;           // within a coefficient block
    std::vector<int> group_dof;              // 1 or 2
    std::vector<std::vector<int>> observed;  // per chunk, 1-based instants ascending
    std::vector<int> noise_offset;           // absolute start per chunk

    int theta_size() const { return 1 + n_dof * (chunks + 1); }
    int noise_count() const;
    int size() const { return theta_size() + noise_count(); }
    int a_coord(int group) const { return 1 + group_offset[group]; }
    int b_coord(int chunk, int group) const {
        return 1 + n_dof * (1 + chunk) + group_offset[group];
    }
};

struct IntervalRow {
    int chunk = 0;
    int instant = 0;      // 1-based within the chunk
    int row = 0;          // row in the chunk's operator matrix (= instant-1)
    int noise_coord = 0;  // absolute coordinate of the attached noise variable
    int level_index = 0;
    double lo = 0.0, hi = 0.0;        // raw cell bounds (may be +-inf)
    double lo_m = 0.0, hi_m = 0.0;    // margin-tightened bounds used by the set
    double scale = 1.0;               // row equilibration factor
};

struct ConeBlock {
    int group = 0;
    int slot = 0;                // 0 = zero-state, 1..T = chunk slot-1
    std::vector<int> coords;     // 1 or 2 coefficient coordinates
};

struct FeasibilityReport {
    bool feasible = false;
    double worst = 0.0;
    std::string worst_constraint;
};

struct ProjectionOptions {
    double tol = 1e-6;
    int max_iter = 2000;
    double rho = 1.0;
    bool warm_start = true;
};

struct ProjectionResult {
    Eigen::VectorXd w;  // projected parameter copy (s)
    Eigen::VectorXd f;  // projected cap copy
    bool converged = false;
    bool infeasible = false;
    int iterations = 0;
    double feas_residual = 0.0;
    double consensus_residual = 0.0;
};

/// The convex constraint set over (w, f): quantizer-cell intervals on the
/// reconstructed noisy outputs, noise boxes, and per-group cone caps
/// |a_g| <= f_g, |b_g^(i)| <= f_g shared across the zero-state slot and all
/// chunk slots. Conjugate symmetry is structural (one representative per
/// pair), so no explicit rows exist for it.
///
/// Immutable after assembly; one projector per thread for concurrent solves.
class FeasibleSet {
 public:
    ParamLayout layout;
    PoleGrid grid;
    QuantizerSpec quantizer;
    double eps = 0.0;
    double margin = 0.0;
    std::vector<Eigen::MatrixXd> chunk_operator;  // full n_i x (1 + 2n) matrices
    std::vector<IntervalRow> intervals;
    std::vector<ConeBlock> cones;

    int cone_slots() const { return layout.chunks + 1; }

    /// Model output of one chunk (no noise), given the stacked parameters.
    Eigen::VectorXd chunk_output(int chunk, const Eigen::VectorXd& w) const;

    /// Splits the stacked parameters into a GriddedSystem and noise values.
    GriddedSystem unpack_system(const Eigen::VectorXd& w) const;
    std::vector<std::vector<double>> unpack_noise(const Eigen::VectorXd& w) const;
};

/// Builds the constraint set for a dataset over a grid. The grid's horizon
/// must already match the data (use PoleGrid::with_horizon).
FeasibleSet assemble(const ChunkedDataset& dataset, const PoleGrid& grid);

/// Checks every interval, box, cone, and nonnegativity constraint to
/// tolerance tol and names the worst violation.
FeasibilityReport is_feasible(const FeasibleSet& set, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& f, double tol);

/// Writes per-constraint violations as CSV (constraint, type, violation).
void dump_violations(const FeasibleSet& set, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& f, const std::string& path);

/// Euclidean projection onto the set by consensus splitting: interval and box
/// atoms plus second-order-cone atoms with cap consensus, solved with a cached
/// LDLT factorization of the fixed normal-equation system. Workspaces persist
/// warm-start state across repeated projections.
class Projector {
 public:
    Projector(const FeasibleSet& set, double rho);

    ProjectionResult project(const Eigen::VectorXd& w_hat,
                             const Eigen::VectorXd& d_hat,
                             const ProjectionOptions& opts);

    void reset_warm_start();

 private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// One-shot projection with a cold-started workspace.
ProjectionResult project(const FeasibleSet& set, const Eigen::VectorXd& w_hat,
                         const Eigen::VectorXd& d_hat,
                         const ProjectionOptions& opts = {});

}  // namespace parsid

#endif  // PARSID_FEASIBLE_SET_HPP_
