#include "parsid/lti_sim.hpp"

#include <cmath>
#include <fstream>

#include "parsid/errors.hpp"

namespace parsid {

namespace {

// Group contribution c * q^e expanded over the implied conjugate: real poles
// give Re(c) * q^e, pairs give c*q^e + conj(c*q^e) = 2*Re(c*q^e).
double expand(const PoleGroup& g, std::complex<double> coeff,
              std::complex<double> q_pow) {
    const std::complex<double> term = coeff * q_pow;
    return g.multiplicity == 2 ? 2.0 * term.real() : term.real();
}

void check_chunk_index(const GriddedSystem& sys, int chunk) {
    if (chunk < 0 || chunk >= static_cast<int>(sys.zero_input_coeffs.size()))
        throw std::out_of_range("chunk index out of range");
}

}  // namespace

double impulse_response(const GriddedSystem& sys, const PoleGrid& grid, int k) {
    if (k < 0) throw std::invalid_argument("impulse_response: k must be >= 0");
    if (k == 0) return sys.r;
    double h = 0.0;
    for (int g = 0; g < grid.group_count(); ++g) {
        const auto& grp = grid.groups[g];
        const double w = grid.scale_zero_state ? grid.alpha[g] : 1.0;
        h += w * expand(grp, sys.zero_state_coeffs[g], std::pow(grp.q, k - 1));
    }
    return h;
}

double zero_input_response(const GriddedSystem& sys, const PoleGrid& grid,
                           int chunk, int k) {
    check_chunk_index(sys, chunk);
    if (k < 1) throw std::invalid_argument("zero_input_response: k must be >= 1");
    double y = 0.0;
    for (int g = 0; g < grid.group_count(); ++g) {
        const auto& grp = grid.groups[g];
        y += grid.alpha[g] *
             expand(grp, sys.zero_input_coeffs[chunk][g], std::pow(grp.q, k - 1));
    }
    return y;
}

double zero_state_response(const GriddedSystem& sys, const PoleGrid& grid,
                           const std::vector<double>& input, int k) {
    if (k < 0 || k >= static_cast<int>(input.size()))
        throw std::out_of_range("zero_state_response: k out of range");
    double y = 0.0;
    for (int m = 0; m <= k; ++m) y += input[m] * impulse_response(sys, grid, k - m);
    return y;
}

std::vector<double> simulate_chunk(const GriddedSystem& sys, const PoleGrid& grid,
                                   int chunk, const std::vector<double>& input) {
    check_chunk_index(sys, chunk);
    const int n = static_cast<int>(input.size());
    // Power sequences once per group; the naive per-sample forms above are
    // O(n^2) in pole count and only serve spot checks.
    const int G = grid.group_count();
    std::vector<std::complex<double>> qpow(G, 1.0);
    std::vector<double> h(n, 0.0), yzi(n, 0.0);
    if (n > 0) h[0] = sys.r;
    for (int j = 0; j < n; ++j) {
        for (int g = 0; g < G; ++g) {
            const auto& grp = grid.groups[g];
            const double wa = grid.scale_zero_state ? grid.alpha[g] : 1.0;
            if (j + 1 < n)
                h[j + 1] += wa * expand(grp, sys.zero_state_coeffs[g], qpow[g]);
            yzi[j] += grid.alpha[g] * expand(grp, sys.zero_input_coeffs[chunk][g], qpow[g]);
        }
        for (int g = 0; g < G; ++g) qpow[g] *= grid.groups[g].q;
    }
    std::vector<double> y(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double conv = 0.0;
        for (int m = 0; m <= j; ++m) conv += input[m] * h[j - m];
        y[j] = yzi[j] + conv;
    }
    return y;
}

ForwardOperator forward_operator(const PoleGrid& grid,
                                 const std::vector<double>& input, int chunk) {
    if (input.empty()) throw std::invalid_argument("forward_operator: empty input");
    const int n = static_cast<int>(input.size());
    const int G = grid.group_count();

    ForwardOperator op;
    op.chunk = chunk;
    int dof = 0;
    for (const auto& g : grid.groups) dof += g.multiplicity;
    op.a_cols = dof;
    op.b_cols = dof;
    op.matrix = Eigen::MatrixXd::Zero(n, 1 + 2 * dof);
    op.column_group.assign(1 + 2 * dof, -1);
    op.column_is_imag.assign(1 + 2 * dof, false);

    // r column: direct feedthrough of the input.
    for (int j = 0; j < n; ++j) op.matrix(j, 0) = input[j];

    // Real/imaginary basis sequences per group: re[j] = Re(q^j), im[j] = Im(q^j).
    int acol = 1;
    int bcol = 1 + dof;
    for (int g = 0; g < G; ++g) {
        const auto& grp = grid.groups[g];
        const double alpha = grid.alpha[g];
        const double wa = grid.scale_zero_state ? alpha : 1.0;
        std::vector<double> re(n), im(n);
        std::complex<double> p = 1.0;
        for (int j = 0; j < n; ++j) {
            re[j] = p.real();
            im[j] = p.imag();
            p *= grp.q;
        }
        const double scale = grp.multiplicity == 2 ? 2.0 : 1.0;

        // Zero-state columns: u convolved with the scaled basis, lagged one
        // step (h(k) uses q^(k-1)); Im basis enters with a minus sign since
        // Re((x+iy)(c+is)) = xc - ys.
        auto fill_a = [&](int col, const std::vector<double>& basis, double sgn) {
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int m = 0; m < j; ++m) acc += input[m] * basis[j - m - 1];
                op.matrix(j, col) = sgn * scale * wa * acc;
            }
        };
        fill_a(acol, re, 1.0);
        op.column_group[acol] = g;
        if (grp.multiplicity == 2) {
            fill_a(acol + 1, im, -1.0);
            op.column_group[acol + 1] = g;
            op.column_is_imag[acol + 1] = true;
        }

        // Zero-input columns: the scaled basis directly.
        for (int j = 0; j < n; ++j) op.matrix(j, bcol) = scale * alpha * re[j];
        op.column_group[bcol] = g;
        if (grp.multiplicity == 2) {
            for (int j = 0; j < n; ++j)
                op.matrix(j, bcol + 1) = -scale * alpha * im[j];
            op.column_group[bcol + 1] = g;
            op.column_is_imag[bcol + 1] = true;
        }
        acol += grp.multiplicity;
        bcol += grp.multiplicity;
    }
    return op;
}

Eigen::VectorXd pack_chunk_params(const GriddedSystem& sys, const PoleGrid& grid,
                                  int chunk) {
    check_chunk_index(sys, chunk);
    int dof = 0;
    for (const auto& g : grid.groups) dof += g.multiplicity;
    Eigen::VectorXd v(1 + 2 * dof);
    v(0) = sys.r;
    int i = 1;
    for (int g = 0; g < grid.group_count(); ++g) {
        v(i++) = sys.zero_state_coeffs[g].real();
        if (grid.groups[g].multiplicity == 2) v(i++) = sys.zero_state_coeffs[g].imag();
    }
    for (int g = 0; g < grid.group_count(); ++g) {
        v(i++) = sys.zero_input_coeffs[chunk][g].real();
        if (grid.groups[g].multiplicity == 2)
            v(i++) = sys.zero_input_coeffs[chunk][g].imag();
    }
    return v;
}

void export_series_csv(const GriddedSystem& sys, const PoleGrid& grid, int chunk,
                       const std::vector<double>& input, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open series csv: " + path);
    out.precision(17);
    out << "k,y,y_zi,y_zs\n";
    const auto y = simulate_chunk(sys, grid, chunk, input);
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double zi = zero_input_response(sys, grid, chunk, static_cast<int>(j) + 1);
        out << (j + 1) << ',' << y[j] << ',' << zi << ',' << (y[j] - zi) << '\n';
    }
}

}  // namespace parsid
