#ifndef PARSID_EPIGRAPH_PROX_HPP_
#define PARSID_EPIGRAPH_PROX_HPP_

#include <string>
#include <utility>
#include <vector>

namespace parsid {

/// Rational exponent p = u/v with gcd(u, v) = 1 and 0 < u <= v, so that
/// 0 < p <= 1. p = 1 selects the absolute-value epigraph closed form.
struct PExponent {
    int u = 1;
    int v = 2;

    double value() const { return static_cast<double>(u) / v; }
    bool is_l1() const { return u == v; }
};

/// Validates and reduces u/v; throws on nonpositive or u > v.
PExponent make_exponent(int u, int v);

/// Parses "u/v", "1", or "0.5"-style decimal shorthands.
PExponent parse_exponent(const std::string& text);

/// Exact Euclidean projection of (x_tilde, t_tilde) onto
/// {(d, t) : t >= |d|^p} for p = u/v < 1. Boundary candidates come from the
/// nonnegative real roots of
///   a^(2v) + (u/v) (a^(2u) - t_tilde a^u) - |x_tilde| a^v,
/// mapped through (d, t) = (sign(x_tilde) a^v, a^u); the kink candidate
/// (0, max(t_tilde, 0)) is always included.
std::pair<double, double> project_epigraph_lp(double x_tilde, double t_tilde,
                                              const PExponent& p);

/// Exact projection onto {(d, t) : t >= |d|}.
std::pair<double, double> project_epigraph_l1(double x_tilde, double t_tilde);

/// All real roots of the polynomial c[0] + c[1] a + ... + c[degree] a^degree,
/// found as companion-matrix eigenvalues (imaginary parts below 1e-8 accepted)
/// and polished by damped Newton corrections. Roots whose residual exceeds
/// tol are dropped.
std::vector<double> real_roots(const std::vector<double>& coeffs, double tol);

}  // namespace parsid

#endif  // PARSID_EPIGRAPH_PROX_HPP_
