#include "parsid/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "parsid/errors.hpp"

namespace parsid {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int ParamLayout::noise_count() const {
    int n = 0;
    for (const auto& k : observed) n += static_cast<int>(k.size());
    return n;
}

Eigen::VectorXd FeasibleSet::chunk_output(int chunk, const Eigen::VectorXd& w) const {
    const auto& M = chunk_operator.at(chunk);
    Eigen::VectorXd local(M.cols());
    local(0) = w(0);
    for (int j = 0; j < layout.n_dof; ++j) local(1 + j) = w(1 + j);
    const int boff = 1 + layout.n_dof * (1 + chunk);
    for (int j = 0; j < layout.n_dof; ++j)
        local(1 + layout.n_dof + j) = w(boff + j);
    return M * local;
}

GriddedSystem FeasibleSet::unpack_system(const Eigen::VectorXd& w) const {
    GriddedSystem sys;
    sys.r = w(0);
    sys.zero_state_coeffs.resize(layout.groups);
    for (int g = 0; g < layout.groups; ++g) {
        const int c = layout.a_coord(g);
        sys.zero_state_coeffs[g] = {w(c), layout.group_dof[g] == 2 ? w(c + 1) : 0.0};
    }
    sys.zero_input_coeffs.resize(layout.chunks);
    for (int i = 0; i < layout.chunks; ++i) {
        sys.zero_input_coeffs[i].resize(layout.groups);
        for (int g = 0; g < layout.groups; ++g) {
            const int c = layout.b_coord(i, g);
            sys.zero_input_coeffs[i][g] = {w(c),
                                           layout.group_dof[g] == 2 ? w(c + 1) : 0.0};
        }
    }
    return sys;
}

std::vector<std::vector<double>> FeasibleSet::unpack_noise(
    const Eigen::VectorXd& w) const {
    std::vector<std::vector<double>> noise(layout.chunks);
    for (int i = 0; i < layout.chunks; ++i) {
        noise[i].assign(chunk_operator[i].rows(), 0.0);
        int idx = layout.noise_offset[i];
        for (int k : layout.observed[i]) noise[i][k - 1] = w(idx++);
    }
    return noise;
}

FeasibleSet assemble(const ChunkedDataset& dataset, const PoleGrid& grid) {
    if (dataset.chunk_count() < 1) throw std::invalid_argument("assemble: empty dataset");

    FeasibleSet set;
    set.grid = grid;
    set.quantizer = dataset.quantizer;
    set.eps = dataset.noise_bound_eps;

    ParamLayout& L = set.layout;
    L.chunks = dataset.chunk_count();
    L.groups = grid.group_count();
    L.group_offset.resize(L.groups);
    L.group_dof.resize(L.groups);
    int off = 0;
    for (int g = 0; g < L.groups; ++g) {
        L.group_offset[g] = off;
        L.group_dof[g] = grid.groups[g].multiplicity;
        off += L.group_dof[g];
    }
    L.n_dof = off;

    L.observed.resize(L.chunks);
    L.noise_offset.resize(L.chunks);
    int noise = L.theta_size();
    for (int i = 0; i < L.chunks; ++i) {
        const auto& c = dataset.chunks[i];
        if (c.length() < 1) throw std::invalid_argument("assemble: empty chunk");
        L.noise_offset[i] = noise;
        for (const auto& [k, lvl] : c.observed) {
            if (k < 1 || k > c.length())
                throw std::invalid_argument("assemble: observed instant out of range");
            if (lvl < 0 || lvl >= dataset.quantizer.cell_count())
                throw std::invalid_argument("assemble: observed level index invalid");
            L.observed[i].push_back(k);
        }
        noise += static_cast<int>(L.observed[i].size());
    }

    // Interval margin: keeps the set closed on the half-open cell side and,
    // when noise slack exists, leaves converged outputs strictly inside their
    // cells so re-quantization reproduces the observed level.
    double min_width = kInf;
    for (int idx = 0; idx < dataset.quantizer.cell_count(); ++idx) {
        const auto [lo, hi] = cell_bounds(dataset.quantizer, idx);
        if (std::isfinite(lo) && std::isfinite(hi)) min_width = std::min(min_width, hi - lo);
    }
    double margin = std::isfinite(min_width) ? 1e-3 * min_width : 1e-9;
    margin = std::min(margin, set.eps > 0.0 ? 0.49 * set.eps : 0.0);
    set.margin = margin;

    for (int i = 0; i < L.chunks; ++i) {
        const auto& c = dataset.chunks[i];
        set.chunk_operator.push_back(forward_operator(grid, c.input, i).matrix);
        int noise_idx = L.noise_offset[i];
        for (const auto& [k, lvl] : c.observed) {
            IntervalRow row;
            row.chunk = i;
            row.instant = k;
            row.row = k - 1;
            row.noise_coord = noise_idx++;
            row.level_index = lvl;
            std::tie(row.lo, row.hi) = cell_bounds(dataset.quantizer, lvl);
            row.lo_m = std::isfinite(row.lo) ? row.lo + margin : -kInf;
            row.hi_m = std::isfinite(row.hi) ? row.hi - margin : kInf;
            row.scale = std::sqrt(set.chunk_operator[i].row(row.row).squaredNorm() + 1.0);
            set.intervals.push_back(row);
        }
    }

    for (int g = 0; g < L.groups; ++g) {
        for (int slot = 0; slot <= L.chunks; ++slot) {
            ConeBlock cone;
            cone.group = g;
            cone.slot = slot;
            const int base = slot == 0 ? L.a_coord(g) : L.b_coord(slot - 1, g);
            cone.coords.push_back(base);
            if (L.group_dof[g] == 2) cone.coords.push_back(base + 1);
            set.cones.push_back(cone);
        }
    }
    return set;
}

namespace {

double interval_violation(double y, double lo, double hi) {
    if (y < lo) return lo - y;
    if (y > hi) return y - hi;
    return 0.0;
}

}  // namespace

FeasibilityReport is_feasible(const FeasibleSet& set, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& f, double tol) {
    FeasibilityReport rep;
    rep.worst = -kInf;  // reports the worst slack even for interior points
    rep.worst_constraint = "none";
    auto note = [&](double v, const std::string& name) {
        if (v > rep.worst) {
            rep.worst = v;
            rep.worst_constraint = name;
        }
    };

    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(set.layout.chunks);
    for (int i = 0; i < set.layout.chunks; ++i) outputs.push_back(set.chunk_output(i, w));

    for (const auto& row : set.intervals) {
        const double y = outputs[row.chunk](row.row) + w(row.noise_coord);
        note(std::max(row.lo_m - y, y - row.hi_m),  // signed slack
             "interval c" + std::to_string(row.chunk) + " k" + std::to_string(row.instant));
        note(std::abs(w(row.noise_coord)) - set.eps,
             "noise box c" + std::to_string(row.chunk) + " k" + std::to_string(row.instant));
    }
    for (const auto& cone : set.cones) {
        double s2 = 0.0;
        for (int c : cone.coords) s2 += w(c) * w(c);
        note(std::sqrt(s2) - f(cone.group),
             "cone g" + std::to_string(cone.group) + " slot" + std::to_string(cone.slot));
    }
    for (int g = 0; g < set.layout.groups; ++g)
        note(-f(g), "nonnegativity f" + std::to_string(g));

    rep.feasible = rep.worst <= tol;
    return rep;
}

void dump_violations(const FeasibleSet& set, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open violations csv: " + path);
    out.precision(17);
    out << "constraint,type,violation\n";
    std::vector<Eigen::VectorXd> outputs;
    for (int i = 0; i < set.layout.chunks; ++i) outputs.push_back(set.chunk_output(i, w));
    int id = 0;
    for (const auto& row : set.intervals) {
        const double y = outputs[row.chunk](row.row) + w(row.noise_coord);
        out << "c" << row.chunk << "_k" << row.instant << ",interval,"
            << interval_violation(y, row.lo_m, row.hi_m) << '\n';
        out << "c" << row.chunk << "_k" << row.instant << ",noise_box,"
            << std::max(0.0, std::abs(w(row.noise_coord)) - set.eps) << '\n';
        ++id;
    }
    for (const auto& cone : set.cones) {
        double s2 = 0.0;
        for (int c : cone.coords) s2 += w(c) * w(c);
        out << "g" << cone.group << "_slot" << cone.slot << ",cone,"
            << std::max(0.0, std::sqrt(s2) - f(cone.group)) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Projection by consensus splitting.
//
// Variables x = (theta, nu, f). Atoms:
//   sum atom per observation: (phi' theta + nu)/c constrained to a cell;
//   box atom per observation: nu in [-eps, eps];
//   cone atom per (group, slot): ||coeffs|| <= f_g, the cap shared across the
//   T+1 slots through the quadratic consensus step.
// The x-update solves (I + rho A'A) x = x_hat + rho A'(z - u); A'A is fixed,
// so its LDLT factorization is computed once and reused across projections.
// ---------------------------------------------------------------------------

struct Projector::Impl {
    const FeasibleSet& set;
    double rho;

    int n_theta, n_obs, n_groups, n_wx;  // n_wx = theta + noise coords
    std::vector<Eigen::MatrixXd> phi_obs;       // per chunk, observed rows only
    std::vector<std::vector<int>> col_map;      // chunk-local column -> global
    std::vector<int> sum_offset;                // per chunk, first sum-atom index

    int cone_atom_offset = 0;
    std::vector<int> cone_offsets;              // per cone, offset into z
    int z_size = 0;

    using Factorization = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;
    std::map<double, std::shared_ptr<Factorization>> factor_cache;
    Factorization* ldlt_ptr = nullptr;
    int rebalances_left = 20;
    double stall_scale = 1.0;  // quarter of the smallest finite cell width

    Eigen::VectorXd z, u, atz_prev;
    bool have_warm = false;

    Impl(const FeasibleSet& s, double rho_in) : set(s), rho(rho_in) {
        const ParamLayout& L = set.layout;
        n_theta = L.theta_size();
        n_obs = L.noise_count();
        n_groups = L.groups;
        n_wx = L.size();

        for (int i = 0; i < L.chunks; ++i) {
            const auto& M = set.chunk_operator[i];
            const int rows = static_cast<int>(L.observed[i].size());
            Eigen::MatrixXd sub(rows, M.cols());
            for (int r = 0; r < rows; ++r) sub.row(r) = M.row(L.observed[i][r] - 1);
            phi_obs.push_back(std::move(sub));

            std::vector<int> map(M.cols());
            map[0] = 0;
            for (int j = 0; j < L.n_dof; ++j) map[1 + j] = 1 + j;
            for (int j = 0; j < L.n_dof; ++j)
                map[1 + L.n_dof + j] = 1 + L.n_dof * (1 + i) + j;
            col_map.push_back(std::move(map));
        }

        sum_offset.resize(L.chunks);
        int pos = 0;
        for (int i = 0; i < L.chunks; ++i) {
            sum_offset[i] = pos;
            pos += static_cast<int>(L.observed[i].size());
        }
        cone_atom_offset = 2 * n_obs;
        pos = cone_atom_offset;
        for (const auto& cone : set.cones) {
            cone_offsets.push_back(pos);
            pos += static_cast<int>(cone.coords.size()) + 1;
        }
        z_size = pos;

        double min_width = kInf;
        for (const auto& row : set.intervals)
            if (std::isfinite(row.lo) && std::isfinite(row.hi))
                min_width = std::min(min_width, row.hi - row.lo);
        stall_scale = std::isfinite(min_width) ? 0.25 * min_width : 1.0;

        select_factorization();
        z = Eigen::VectorXd::Zero(z_size);
        u = Eigen::VectorXd::Zero(z_size);
        atz_prev = Eigen::VectorXd::Zero(n_wx + n_groups);
    }

    void select_factorization() {
        auto it = factor_cache.find(rho);
        if (it == factor_cache.end()) {
            auto fac = std::make_shared<Factorization>();
            fac->compute(normal_matrix());
            if (fac->info() != Eigen::Success)
                throw std::runtime_error("projector: factorization failed");
            it = factor_cache.emplace(rho, std::move(fac)).first;
        }
        ldlt_ptr = it->second.get();
    }

    Eigen::SparseMatrix<double> normal_matrix() {
        std::vector<Eigen::Triplet<double>> trip;
        const ParamLayout& L = set.layout;
        for (int c = 0; c < n_wx; ++c) trip.emplace_back(c, c, 1.0);

        // Cone rows add rho on every coefficient coordinate.
        for (const auto& cone : set.cones)
            for (int c : cone.coords) trip.emplace_back(c, c, rho);

        for (int i = 0; i < L.chunks; ++i) {
            const auto& P = phi_obs[i];
            const auto& map = col_map[i];
            const int rows = static_cast<int>(P.rows());
            if (rows == 0) continue;
            Eigen::VectorXd wrow(rows);
            for (int r = 0; r < rows; ++r) {
                const double c = set.intervals[sum_offset[i] + r].scale;
                wrow(r) = rho / (c * c);
            }
            const Eigen::MatrixXd B = P.transpose() * wrow.asDiagonal() * P;
            for (int a = 0; a < B.rows(); ++a)
                for (int b = 0; b < B.cols(); ++b)
                    if (B(a, b) != 0.0) trip.emplace_back(map[a], map[b], B(a, b));
            // theta-nu coupling and the nu diagonal from sum and box rows.
            for (int r = 0; r < rows; ++r) {
                const auto& row = set.intervals[sum_offset[i] + r];
                const int nc = row.noise_coord;
                for (int a = 0; a < P.cols(); ++a) {
                    const double v = wrow(r) * P(r, a);
                    if (v == 0.0) continue;
                    trip.emplace_back(map[a], nc, v);
                    trip.emplace_back(nc, map[a], v);
                }
                trip.emplace_back(nc, nc, wrow(r) + rho);  // sum + box atom
            }
        }

        Eigen::SparseMatrix<double> K(n_wx, n_wx);
        K.setFromTriplets(trip.begin(), trip.end());
        return K;
    }

    // x is stacked (theta, nu, f); z/u live in atom space.
    void apply_A(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
        const ParamLayout& L = set.layout;
        for (int i = 0; i < L.chunks; ++i) {
            const auto& P = phi_obs[i];
            const auto& map = col_map[i];
            const int rows = static_cast<int>(P.rows());
            if (rows == 0) continue;
            Eigen::VectorXd local(P.cols());
            for (int a = 0; a < P.cols(); ++a) local(a) = x(map[a]);
            Eigen::VectorXd y = P * local;
            for (int r = 0; r < rows; ++r) {
                const auto& row = set.intervals[sum_offset[i] + r];
                out(sum_offset[i] + r) = (y(r) + x(row.noise_coord)) / row.scale;
            }
        }
        for (int o = 0; o < n_obs; ++o)
            out(n_obs + o) = x(set.intervals[o].noise_coord);
        for (std::size_t ci = 0; ci < set.cones.size(); ++ci) {
            const auto& cone = set.cones[ci];
            int pos = cone_offsets[ci];
            for (int c : cone.coords) out(pos++) = x(c);
            out(pos) = x(n_wx + cone.group);
        }
    }

    void apply_AT(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
        const ParamLayout& L = set.layout;
        out.setZero();
        for (int i = 0; i < L.chunks; ++i) {
            const auto& P = phi_obs[i];
            const auto& map = col_map[i];
            const int rows = static_cast<int>(P.rows());
            if (rows == 0) continue;
            Eigen::VectorXd scaled(rows);
            for (int r = 0; r < rows; ++r) {
                const auto& row = set.intervals[sum_offset[i] + r];
                scaled(r) = v(sum_offset[i] + r) / row.scale;
                out(row.noise_coord) += scaled(r);
            }
            Eigen::VectorXd local = P.transpose() * scaled;
            for (int a = 0; a < P.cols(); ++a) out(map[a]) += local(a);
        }
        for (int o = 0; o < n_obs; ++o)
            out(set.intervals[o].noise_coord) += v(n_obs + o);
        for (std::size_t ci = 0; ci < set.cones.size(); ++ci) {
            const auto& cone = set.cones[ci];
            int pos = cone_offsets[ci];
            for (int c : cone.coords) out(c) += v(pos++);
            out(n_wx + cone.group) += v(pos);
        }
    }

    void project_atoms(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
        for (int o = 0; o < n_obs; ++o) {
            const auto& row = set.intervals[o];
            out(o) = std::clamp(in(o), row.lo_m / row.scale, row.hi_m / row.scale);
            out(n_obs + o) = std::clamp(in(n_obs + o), -set.eps, set.eps);
        }
        for (std::size_t ci = 0; ci < set.cones.size(); ++ci) {
            const auto& cone = set.cones[ci];
            const int pos = cone_offsets[ci];
            const int dof = static_cast<int>(cone.coords.size());
            double s2 = 0.0;
            for (int j = 0; j < dof; ++j) s2 += in(pos + j) * in(pos + j);
            const double s = std::sqrt(s2);
            const double t = in(pos + dof);
            if (s <= t) {
                for (int j = 0; j <= dof; ++j) out(pos + j) = in(pos + j);
            } else if (s <= -t) {
                for (int j = 0; j <= dof; ++j) out(pos + j) = 0.0;
            } else {
                const double m = 0.5 * (s + t);
                const double scale = s > 0.0 ? m / s : 0.0;
                for (int j = 0; j < dof; ++j) out(pos + j) = scale * in(pos + j);
                out(pos + dof) = m;
            }
        }
    }

    // Worst natural-units constraint violation of the x iterate.
    double natural_feasibility(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& ax) const {
        double worst = 0.0;
        for (int o = 0; o < n_obs; ++o) {
            const auto& row = set.intervals[o];
            const double y = ax(o) * row.scale;
            worst = std::max(worst, interval_violation(y, row.lo_m, row.hi_m));
            worst = std::max(worst, std::abs(x(row.noise_coord)) - set.eps);
        }
        for (std::size_t ci = 0; ci < set.cones.size(); ++ci) {
            const auto& cone = set.cones[ci];
            double s2 = 0.0;
            for (int c : cone.coords) s2 += x(c) * x(c);
            worst = std::max(worst, std::sqrt(s2) - x(n_wx + cone.group));
        }
        return worst;
    }

    ProjectionResult run(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& d_hat,
                         const ProjectionOptions& opts) {
        const int nx = n_wx + n_groups;
        Eigen::VectorXd x_hat(nx);
        x_hat.head(n_wx) = w_hat;
        x_hat.tail(n_groups) = d_hat;

        if (!opts.warm_start || !have_warm) {
            z.setZero();
            u.setZero();
            apply_AT(z, atz_prev);
        }

        constexpr double kRelax = 1.7;
        Eigen::VectorXd x(nx), ax(z_size), ax_hat(z_size), atv(nx), rhs(n_wx);

        ProjectionResult res;
        double best_first = kInf, best_second = kInf;
        int it = 0;
        for (; it < opts.max_iter; ++it) {
            // x-update through the cached factorization
            apply_AT(z - u, atv);
            rhs = x_hat.head(n_wx) + rho * atv.head(n_wx);
            x.head(n_wx) = ldlt_ptr->solve(rhs);
            x.tail(n_groups) = (x_hat.tail(n_groups) + rho * atv.tail(n_groups)) /
                               (1.0 + rho * (set.layout.chunks + 1));

            // over-relaxed z-update and dual step
            apply_A(x, ax);
            ax_hat = kRelax * ax + (1.0 - kRelax) * z;
            project_atoms(ax_hat + u, z);
            u += ax_hat - z;

            const double r_cons = (ax - z).lpNorm<Eigen::Infinity>();
            apply_AT(z, atv);
            const double r_dual = rho * (atv - atz_prev).lpNorm<Eigen::Infinity>();
            atz_prev = atv;
            const double r_feas = natural_feasibility(x, ax);
            (2 * it < opts.max_iter ? best_first : best_second) =
                std::min(2 * it < opts.max_iter ? best_first : best_second, r_feas);

            if (r_cons <= opts.tol && r_dual <= opts.tol) {
                res.converged = true;
                res.consensus_residual = r_cons;
                res.feas_residual = r_feas;
                ++it;
                break;
            }
            if (it + 1 == opts.max_iter) {
                res.consensus_residual = r_cons;
                res.feas_residual = r_feas;
            }

            // Residual balancing: refactorizations are cached per penalty value.
            if (it % 50 == 49 && rebalances_left > 0) {
                if (r_cons > 10.0 * r_dual && rho < 1e4) {
                    rho *= 2.0;
                    u *= 0.5;
                    select_factorization();
                    --rebalances_left;
                } else if (r_dual > 10.0 * r_cons && rho > 1e-4) {
                    rho *= 0.5;
                    u *= 2.0;
                    select_factorization();
                    --rebalances_left;
                }
            }
        }
        // An infeasible set leaves the feasibility residual stalled at a level
        // comparable to the cell geometry for the whole iteration budget.
        if (!res.converged && best_second > stall_scale &&
            best_second >= 0.99 * best_first) {
            res.infeasible = true;
        }
        have_warm = true;
        res.iterations = it;
        res.w = x.head(n_wx);
        res.f = x.tail(n_groups);
        return res;
    }
};

Projector::Projector(const FeasibleSet& set, double rho)
    : impl_(std::make_shared<Impl>(set, rho)) {}

ProjectionResult Projector::project(const Eigen::VectorXd& w_hat,
                                    const Eigen::VectorXd& d_hat,
                                    const ProjectionOptions& opts) {
    if (w_hat.size() != impl_->n_wx || d_hat.size() != impl_->n_groups)
        throw std::invalid_argument("project: dimension mismatch");
    return impl_->run(w_hat, d_hat, opts);
}

void Projector::reset_warm_start() { impl_->have_warm = false; }

ProjectionResult project(const FeasibleSet& set, const Eigen::VectorXd& w_hat,
                         const Eigen::VectorXd& d_hat,
                         const ProjectionOptions& opts) {
    Projector p(set, opts.rho);
    ProjectionOptions o = opts;
    o.warm_start = false;
    return p.project(w_hat, d_hat, o);
}

}  // namespace parsid
