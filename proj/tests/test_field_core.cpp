#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "thermo1d/errors.hpp"
#include "thermo1d/field.hpp"
#include "thermo1d/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace thermo1d;
using thermo1d::testing::dense_solve;
using thermo1d::testing::max_abs;

namespace {

constexpr double pi = std::numbers::pi;

double max_interior_error(const Field& approx, const std::function<double(double)>& exact)
{
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < approx.size(); ++i) {
        m = std::max(m, std::abs(approx[i] - exact(approx.grid().x(i))));
    }
    return m;
}

double max_error(const Field& approx, const std::function<double(double)>& exact)
{
    double m = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        m = std::max(m, std::abs(approx[i] - exact(approx.grid().x(i))));
    }
    return m;
}

// Random smooth samples: a few random Fourier modes.
Field random_smooth(std::mt19937_64& rng, const GridPtr& g, Boundary bc)
{
    std::normal_distribution<double> coef(0.0, 1.0);
    double c[4];
    for (double& x : c) {
        x = coef(rng);
    }
    const double shift = coef(rng);
    const double len = g->length();
    return Field::sample(
        g,
        [&](double x) {
            const double s = (x - g->a()) / len;
            if (bc == Boundary::DirichletZero) {
                return c[0] * std::sin(pi * s) + c[1] * std::sin(2 * pi * s) +
                       c[2] * std::sin(3 * pi * s) + c[3] * s * (1 - s);
            }
            return shift + c[0] * std::cos(pi * s) + c[1] * std::sin(2 * pi * s) + c[2] * s +
                   c[3] * std::exp(s);
        },
        bc);
}

Field random_rough(std::mt19937_64& rng, const GridPtr& g, Boundary bc)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g, bc);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = u(rng);
    }
    f.enforce_bc();
    return f;
}

}  // namespace

TEST_CASE("grid weights and invariants")
{
    for (int n : {2, 3, 17, 64, 1000}) {
        const Grid g(-0.3, 2.2, n);
        CHECK(g.n_nodes() == static_cast<std::size_t>(n) + 1);
        double sum = 0.0;
        for (double w : g.weights()) {
            sum += w;
        }
        CHECK(std::abs(sum - g.length()) <= 1e-13 * g.length());
        CHECK(g.x(g.n_nodes() - 1) == 2.2);
    }
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), InvalidGrid);
    CHECK_THROWS_AS(Grid(1.0, 1.0, 8), InvalidGrid);
    CHECK_THROWS_AS(Grid(0.0, NAN, 8), InvalidGrid);
}

TEST_CASE("dirichlet fields hold exact endpoint zeros")
{
    const auto g = make_grid(0.0, 1.0, 8);
    CHECK_THROWS_AS(Field(g, std::vector<double>(9, 1.0), Boundary::DirichletZero), InvalidField);
    CHECK_THROWS_AS(Field(g, std::vector<double>(5, 0.0), Boundary::NeumannZero), InvalidField);
    const Field f = Field::sample(g, [](double) { return 3.0; }, Boundary::DirichletZero);
    CHECK(f[0] == 0.0);
    CHECK(f[8] == 0.0);
    CHECK(f[4] == 3.0);
}

TEST_CASE("d1 of a linear function is exact in the interior")
{
    const auto g = make_grid(0.0, 1.0, 8);
    const Field f = Field::sample(g, [](double x) { return x; }, Boundary::NeumannZero);
    const Field df = d1(f);
    for (std::size_t i = 1; i < 8; ++i) {
        CHECK(df[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(df[0] == 0.0);  // NeumannZero endpoints report zero slope
    CHECK(df.bc() == Boundary::NeumannZero);
}

TEST_CASE("d1 of a constant vanishes")
{
    const auto g = make_grid(0.0, 1.0, 8);
    const Field f = Field::sample(g, [](double) { return 3.0; }, Boundary::NeumannZero);
    const Field df = d1(f);
    CHECK(max_abs({df.values().begin(), df.values().end()}) == 0.0);
}

TEST_CASE("d1 converges at second order against the analytic derivative")
{
    auto error = [](int n) {
        const auto g = make_grid(0.0, 1.0, n);
        const Field f =
            Field::sample(g, [](double x) { return std::sin(pi * x); }, Boundary::DirichletZero);
        return max_interior_error(d1(f), [](double x) { return pi * std::cos(pi * x); });
    };
    const double e64 = error(64);
    const double e128 = error(128);
    CHECK(e64 / e128 >= 3.6);

    // One-sided endpoint stencils are second order as well.
    auto endpoint_error = [](int n) {
        const auto g = make_grid(0.0, 1.0, n);
        const Field f =
            Field::sample(g, [](double x) { return std::sin(pi * x); }, Boundary::DirichletZero);
        return max_error(d1(f), [](double x) { return pi * std::cos(pi * x); });
    };
    CHECK(endpoint_error(64) / endpoint_error(128) >= 3.6);
}

TEST_CASE("d2 examples")
{
    SUBCASE("constant is in the Neumann kernel")
    {
        const auto g = make_grid(0.0, 1.0, 16);
        const Field f = Field::sample(g, [](double) { return 2.5; }, Boundary::NeumannZero);
        const Field f2 = d2(f);
        for (double v : f2.values()) {
            CHECK(v == 0.0);
        }
    }
    SUBCASE("quadratic is exact for the three-point stencil")
    {
        for (int n : {2, 5, 64}) {
            const auto g = make_grid(0.0, 1.0, n);
            const Field f = Field::sample(g, [](double x) { return x * (1 - x); },
                                          Boundary::DirichletZero);
            const Field f2 = d2(f);
            for (std::size_t i = 1; i + 1 < f2.size(); ++i) {
                CHECK(f2[i] == doctest::Approx(-2.0).epsilon(1e-9));
            }
            CHECK(f2[0] == 0.0);
        }
    }
    SUBCASE("cosine converges at second order with ghost reflection")
    {
        auto error = [](int n) {
            const auto g = make_grid(0.0, 1.0, n);
            const Field f =
                Field::sample(g, [](double x) { return std::cos(pi * x); }, Boundary::NeumannZero);
            return max_error(d2(f), [](double x) { return -pi * pi * std::cos(pi * x); });
        };
        CHECK(error(64) / error(128) >= 3.6);
    }
}

TEST_CASE("norms")
{
    const auto g2 = make_grid(0.0, 2.0, 7);
    const NormSet one = norms(Field::sample(g2, [](double) { return 1.0; }, Boundary::NeumannZero));
    CHECK(one.l1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(one.l2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(one.linf == 1.0);
    CHECK(one.h1_semi == 0.0);

    const NormSet zero = norms(Field(g2, Boundary::NeumannZero));
    CHECK(zero.l1 == 0.0);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.linf == 0.0);
    CHECK(zero.h1_semi == 0.0);

    const auto g = make_grid(0.0, 1.0, 128);
    const NormSet s =
        norms(Field::sample(g, [](double x) { return std::sin(pi * x); }, Boundary::DirichletZero));
    CHECK(std::abs(s.l2 - std::sqrt(0.5)) <= 1e-3);
}

TEST_CASE("norm set invariants on random fields")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = make_grid(-1.0, 0.5 + trial * 0.1, 10 + trial);
        const Field f = random_rough(rng, g, trial % 2 ? Boundary::DirichletZero : Boundary::NeumannZero);
        const NormSet n = norms(f);
        CHECK(n.l1 >= 0.0);
        CHECK(n.h1_semi >= 0.0);
        CHECK(n.l2 <= std::sqrt(g->length()) * n.linf + 1e-12);
    }
}

TEST_CASE("tridiag_solve examples")
{
    SUBCASE("identity")
    {
        const std::vector<double> r{1.5, -2.0, 3.25, 0.0};
        const auto x = tridiag_solve(std::vector<double>(4, 0.0), std::vector<double>(4, 1.0),
                                     std::vector<double>(4, 0.0), r);
        CHECK(x == r);
    }
    SUBCASE("second-difference matrix matches dense elimination")
    {
        const thermo1d::testing::Tridiagonal t{{0, -1, -1, -1}, {2, 2, 2, 2}, {-1, -1, -1, 0}};
        const std::vector<double> rhs{1, 0, 0, 1};
        const auto x = tridiag_solve(t.lower, t.diag, t.upper, rhs);
        const auto ref = dense_solve(t.dense(), rhs);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(x[i] - ref[i]) <= 1e-12);
            CHECK(x[i] == doctest::Approx(1.0));
        }
    }
    SUBCASE("random dominant 8x8 residual")
    {
        std::mt19937_64 rng(2024);
        const auto t = thermo1d::testing::random_dominant(rng, 8);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        std::vector<double> rhs(8);
        for (double& r : rhs) {
            r = u(rng);
        }
        const auto x = tridiag_solve(t.lower, t.diag, t.upper, rhs);
        const auto ax = t.apply(x);
        std::vector<double> res(8);
        for (std::size_t i = 0; i < 8; ++i) {
            res[i] = ax[i] - rhs[i];
        }
        CHECK(max_abs(res) <= 1e-10 * (1.0 + max_abs(rhs)));
    }
}

TEST_CASE("tridiag_solve agrees with dense elimination on seeded systems")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = size(rng);
        const auto t = thermo1d::testing::random_dominant(rng, n);
        std::vector<double> rhs(n);
        for (double& r : rhs) {
            r = u(rng);
        }
        const auto x = tridiag_solve(t.lower, t.diag, t.upper, rhs);
        const auto ref = dense_solve(t.dense(), rhs);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(x[i] - ref[i]) <= 1e-10);
        }
    }
}

TEST_CASE("tridiag_solve refuses singular non-dominant systems")
{
    // [[1, 1], [1, 1]]: not strictly dominant anywhere, second pivot is 0.
    CHECK_THROWS_AS(tridiag_solve(std::vector<double>{0, 1}, std::vector<double>{1, 1},
                                  std::vector<double>{1, 0}, std::vector<double>{1, 2}),
                    NonDominantMatrix);
    // Tiny pivot in a non-dominant matrix.
    CHECK_THROWS_AS(tridiag_solve(std::vector<double>{0, 1}, std::vector<double>{1e-16, 1},
                                  std::vector<double>{1, 0}, std::vector<double>{1, 2}),
                    NonDominantMatrix);
    CHECK_THROWS_AS(tridiag_solve(std::vector<double>{0, 1}, std::vector<double>{1, 1},
                                  std::vector<double>{1}, std::vector<double>{1, 2}),
                    ValidationError);
    // SPD but not dominant: still solved.
    const thermo1d::testing::Tridiagonal spd{{0, 1.0}, {1.0, 2.0}, {1.0, 0}};
    const auto x = tridiag_solve(spd.lower, spd.diag, spd.upper, std::vector<double>{1, 1});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(0.0));
}

TEST_CASE("summation by parts holds to second order")
{
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        for (int n : {32, 64, 128}) {
            const auto g = make_grid(0.0, 1.0 + 0.05 * trial, n);
            const Field gd = random_smooth(rng, g, Boundary::DirichletZero);
            const Field p = random_smooth(rng, g, trial % 2 ? Boundary::NeumannZero : Boundary::DirichletZero);
            const double defect = std::abs(inner(p, d1(gd)) + inner(d1(p), gd));
            const double scale = g->h() * g->h() * l2_norm(p) * l2_norm(gd);
            worst = std::max(worst, defect / scale);
        }
    }
    MESSAGE("max SBP defect / (h^2 |p| |g|) = " << worst);
    CHECK(worst <= 100.0);
}

TEST_CASE("neumann d2 conserves mass and is symmetric negative semidefinite")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = make_grid(-1.0, 1.0 + 0.01 * trial, 4 + trial);
        const Field f = random_rough(rng, g, Boundary::NeumannZero);
        const Field q = random_rough(rng, g, Boundary::NeumannZero);
        const double norm = l2_norm(f);
        const double h2 = g->h() * g->h();
        CHECK(std::abs(integrate(d2(f))) <= 1e-12 * norm / h2);
        CHECK(inner(f, d2(f)) <= 1e-12);
        CHECK(std::abs(inner(f, d2(q)) - inner(d2(f), q)) <= 1e-12 * norm * l2_norm(q) / h2);
    }
}

TEST_CASE("agmon_check examples")
{
    const auto g = make_grid(0.0, 1.0, 128);
    SUBCASE("zero")
    {
        const AgmonResult r = agmon_check(Field(g, Boundary::DirichletZero));
        CHECK(r.holds);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
    }
    SUBCASE("constant is tight for the general form")
    {
        const AgmonResult r =
            agmon_check(Field::sample(g, [](double) { return -1.7; }, Boundary::NeumannZero));
        CHECK(r.holds);
        CHECK(r.lhs == doctest::Approx(1.7));
        CHECK(r.rhs == doctest::Approx(1.7).epsilon(1e-14));
    }
    SUBCASE("sine with zero boundary values")
    {
        const AgmonResult r = agmon_check(
            Field::sample(g, [](double x) { return std::sin(pi * x); }, Boundary::DirichletZero));
        CHECK(r.holds);
        CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.rhs == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-3));
        CHECK(r.slack == doctest::Approx(r.rhs - r.lhs));
    }
}

TEST_CASE("agmon holds on random fields")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = make_grid(0.0, 0.5 + trial * 0.02, 8 + trial);
        CHECK(agmon_check(random_smooth(rng, g, Boundary::DirichletZero)).holds);
        CHECK(agmon_check(random_smooth(rng, g, Boundary::NeumannZero)).holds);
    }
}
