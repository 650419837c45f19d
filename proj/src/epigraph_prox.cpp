#include "parsid/epigraph_prox.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace parsid {

PExponent make_exponent(int u, int v) {
    if (u < 1 || v < 1) throw std::invalid_argument("exponent: u, v must be positive");
    if (u > v) throw std::invalid_argument("exponent: p = u/v must satisfy p <= 1");
    const int g = std::gcd(u, v);
    return PExponent{u / g, v / g};
}

PExponent parse_exponent(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            return make_exponent(std::stoi(text.substr(0, slash)),
                                 std::stoi(text.substr(slash + 1)));
        }
        if (text.find('.') != std::string::npos) {
            // Decimal shorthand; accept fractions with denominator up to 16.
            const double val = std::stod(text);
            for (int v = 1; v <= 16; ++v) {
                const double u = val * v;
                if (std::abs(u - std::round(u)) < 1e-9 && std::round(u) >= 1.0)
                    return make_exponent(static_cast<int>(std::round(u)), v);
            }
            throw std::invalid_argument("exponent: not a small rational: " + text);
        }
        if (std::stoi(text) == 1) return make_exponent(1, 1);
        throw std::invalid_argument("exponent: integer form must be \"1\"");
    } catch (const std::logic_error&) {
        throw std::invalid_argument("exponent: cannot parse \"" + text + "\"");
    }
}

std::vector<double> real_roots(const std::vector<double>& coeffs, double tol) {
    int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree < 1) throw std::invalid_argument("real_roots: degree must be >= 1");
    if (coeffs[degree] == 0.0)
        throw std::invalid_argument("real_roots: leading coefficient is zero");
    if (degree > 16) throw std::invalid_argument("real_roots: degree exceeds 16");

    const auto eval = [&](double a) {
        double p = 0.0;
        for (int i = degree; i >= 0; --i) p = p * a + coeffs[i];
        return p;
    };
    const auto eval_deriv = [&](double a) {
        double p = 0.0;
        for (int i = degree; i >= 1; --i) p = p * a + i * coeffs[i];
        return p;
    };

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i)
        companion(i, degree - 1) = -coeffs[i] / coeffs[degree];

    Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, /*computeEigenvectors=*/false);

    double scale = 0.0;
    for (const double c : coeffs) scale = std::max(scale, std::abs(c));

    std::vector<double> roots;
    for (int i = 0; i < degree; ++i) {
        const auto z = eig.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z.real()))) continue;
        double a = z.real();
        // Damped Newton polish.
        for (int it = 0; it < 20; ++it) {
            const double f = eval(a);
            const double df = eval_deriv(a);
            if (df == 0.0) break;
            double step = f / df;
            const double cap = 0.5 * (1.0 + std::abs(a));
            step = std::clamp(step, -cap, cap);
            const double next = a - step;
            if (std::abs(eval(next)) >= std::abs(f)) break;
            a = next;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(a))) break;
        }
        double amax = std::max(1.0, std::abs(a));
        if (std::abs(eval(a)) > tol * std::max(scale, std::pow(amax, degree))) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](double r) {
            return std::abs(r - a) <= 1e-10 * (1.0 + std::abs(a));
        });
        if (!dup) roots.push_back(a);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::pair<double, double> project_epigraph_lp(double x_tilde, double t_tilde,
                                              const PExponent& p) {
    if (p.u >= p.v)
        throw std::invalid_argument("project_epigraph_lp: requires p < 1");
    const double ax = std::abs(x_tilde);
    const double pval = p.value();
    if (t_tilde >= std::pow(ax, pval)) return {x_tilde, t_tilde};

    const double sgn = x_tilde < 0.0 ? -1.0 : 1.0;
    const double ratio = pval;

    // Divide out the common a^u factor of the stationarity polynomial; the
    // discarded a = 0 root is dominated by the kink candidate below.
    const int deg = 2 * p.v - p.u;
    std::vector<double> c(deg + 1, 0.0);
    c[deg] += 1.0;                 // a^(2v-u)
    c[p.u] += ratio;               // (u/v) a^u
    c[0] += -ratio * t_tilde;
    c[p.v - p.u] += -ax;           // -|x| a^(v-u)

    double best_d = 0.0;
    double best_t = std::max(t_tilde, 0.0);
    double best_dist = (0.0 - x_tilde) * (0.0 - x_tilde) +
                       (best_t - t_tilde) * (best_t - t_tilde);
    for (double a : real_roots(c, 1e-8)) {
        if (a < -1e-12) continue;
        a = std::max(a, 0.0);
        const double d = sgn * std::pow(a, p.v);
        const double t = std::pow(a, p.u);
        const double dist =
            (d - x_tilde) * (d - x_tilde) + (t - t_tilde) * (t - t_tilde);
        if (dist < best_dist) {
            best_dist = dist;
            best_d = d;
            best_t = t;
        }
    }
    return {best_d, best_t};
}

std::pair<double, double> project_epigraph_l1(double x_tilde, double t_tilde) {
    const double ax = std::abs(x_tilde);
    if (t_tilde >= ax) return {x_tilde, t_tilde};
    if (t_tilde <= -ax) return {0.0, 0.0};
    const double m = 0.5 * (ax + t_tilde);
    return {x_tilde < 0.0 ? -m : m, m};
}

}  // namespace parsid
