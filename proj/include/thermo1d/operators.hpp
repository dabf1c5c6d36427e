#pragma once

#include "thermo1d/field.hpp"

#include <span>
#include <vector>

namespace thermo1d {

struct NormSet {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double h1_semi = 0.0;  ///< l2 norm of d1(f)
};

/// First derivative. Centered in the interior. DirichletZero fields use
/// second-order one-sided stencils at the endpoints; NeumannZero fields get 0
/// there. The result is always tagged NeumannZero.
Field d1(const Field& f);

/// Three-point second derivative. Dirichlet endpoints are left at 0;
/// Neumann endpoints use ghost reflection f[-1] = f[1], f[N+1] = f[N-1].
Field d2(const Field& f);

/// Trapezoid-weighted inner product sum_i w_i f_i g_i.
double inner(const Field& f, const Field& g);
double inner(const Grid& grid, std::span<const double> f, std::span<const double> g);

/// sum_i w_i f_i
double integrate(const Field& f);

NormSet norms(const Field& f);
double l2_norm(const Field& f);

/// Solves the tridiagonal system
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// All four sequences have length n; lower[0] and upper[n-1] are ignored.
/// Throws NonDominantMatrix if the matrix is not diagonally dominant and
/// elimination meets a pivot smaller than 1e-14 in magnitude.
std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs);

struct AgmonResult {
    bool holds = true;
    double lhs = 0.0;    ///< max |f|
    double rhs = 0.0;    ///< interpolation bound
    double slack = 0.0;  ///< rhs - lhs
};

inline constexpr double kAgmonRelativeSlack = 0.05;
inline constexpr double kAgmonAbsoluteSlack = 1e-10;

/// Evaluates Agmon's inequality with discrete norms:
///   DirichletZero: max|f| <= sqrt(|f| |f_x|)
///   otherwise:     max|f| <= sqrt(2 |f| |f_x|) + sqrt(|f|^2 / (b - a))
/// holds = lhs <= 1.05 rhs + 1e-10.
AgmonResult agmon_check(const Field& f);

}  // namespace thermo1d
