#include "thermo1d/operators.hpp"

#include "thermo1d/errors.hpp"

#include <algorithm>
#include <cmath>

namespace thermo1d {

Field d1(const Field& f)
{
    const Grid& g = f.grid();
    const std::size_t n = f.size();
    const double inv2h = 1.0 / (2.0 * g.h());
    Field out(f.grid_ptr(), Boundary::NeumannZero);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - f[i - 1]) * inv2h;
    }
    if (f.bc() == Boundary::DirichletZero) {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    }
    return out;
}

Field d2(const Field& f)
{
    const Grid& g = f.grid();
    const std::size_t n = f.size();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    Field out(f.grid_ptr(), f.bc());
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
    }
    if (f.bc() == Boundary::NeumannZero) {
        out[0] = 2.0 * (f[1] - f[0]) * inv_h2;
        out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) * inv_h2;
    }
    return out;
}

double inner(const Grid& grid, std::span<const double> f, std::span<const double> g)
{
    const auto w = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i] * f[i] * g[i];
    }
    return sum;
}

double inner(const Field& f, const Field& g)
{
    require_same_grid(f.grid(), g.grid());
    return inner(f.grid(), f.values(), g.values());
}

double integrate(const Field& f)
{
    const auto w = f.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i] * f[i];
    }
    return sum;
}

double l2_norm(const Field& f)
{
    return std::sqrt(inner(f.grid(), f.values(), f.values()));
}

NormSet norms(const Field& f)
{
    const auto w = f.grid().weights();
    NormSet out;
    double sq = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double a = std::abs(f[i]);
        out.l1 += w[i] * a;
        sq += w[i] * a * a;
        out.linf = std::max(out.linf, a);
    }
    out.l2 = std::sqrt(sq);
    out.h1_semi = l2_norm(d1(f));
    return out;
}

std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs)
{
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw ValidationError("tridiag_solve: inconsistent sequence lengths");
    }

    bool dominant = true;
    bool strict_somewhere = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(lower[i]) : 0.0) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
        const double d = std::abs(diag[i]);
        if (d < off) {
            dominant = false;
        }
        if (d > off) {
            strict_somewhere = true;
        }
    }
    dominant = dominant && strict_somewhere;

    constexpr double kMinPivot = 1e-14;
    std::vector<double> c(n, 0.0);
    std::vector<double> x(n, 0.0);

    double pivot = diag[0];
    if (pivot == 0.0 || (!dominant && std::abs(pivot) < kMinPivot)) {
        throw NonDominantMatrix(0, pivot);
    }
    c[0] = n > 1 ? upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c[i - 1];
        if (pivot == 0.0 || (!dominant && std::abs(pivot) < kMinPivot)) {
            throw NonDominantMatrix(i, pivot);
        }
        c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

AgmonResult agmon_check(const Field& f)
{
    const NormSet ns = norms(f);
    AgmonResult r;
    r.lhs = ns.linf;
    if (f.bc() == Boundary::DirichletZero) {
        r.rhs = std::sqrt(ns.l2 * ns.h1_semi);
    } else {
        r.rhs = std::sqrt(2.0 * ns.l2 * ns.h1_semi) + std::sqrt(ns.l2 * ns.l2 / f.grid().length());
    }
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= (1.0 + kAgmonRelativeSlack) * r.rhs + kAgmonAbsoluteSlack;
    return r;
}

}  // namespace thermo1d
