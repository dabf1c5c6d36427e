#include "thermo1d/experiments.hpp"

#include "thermo1d/errors.hpp"
#include "thermo1d/operators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace thermo1d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string str(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

unsigned resolve_threads(unsigned requested)
{
    return requested > 0 ? requested : branch_threads();
}

double order(double coarse, double fine, double ratio)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) {
        return kNaN;
    }
    return std::log(coarse / fine) / std::log(ratio);
}

}  // namespace

unsigned branch_threads()
{
    if (const char* env = std::getenv("THERMO1D_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(value);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

InitialData standard_packet_data(const GridPtr& grid)
{
    return InitialData{make_profile(SinePacket{0.5, 1}, grid, Boundary::DirichletZero),
                       make_profile(Bump{0.5, 0.5, 0.25}, grid, Boundary::DirichletZero),
                       make_profile(SinePacket{1.0, 1}, grid, Boundary::NeumannZero)};
}

PhysParams default_params(const Grid& grid, double mu, double nu, double t_end)
{
    PhysParams p;
    p.mu = mu;
    p.nu = nu;
    p.dt = grid.h() / 4.0;
    p.t_end = t_end;
    return p;
}

std::vector<SuiteCase> standard_suite()
{
    std::vector<SuiteCase> cases;
    for (double mu : {0.0, 0.5, 1.0, 2.0}) {
        for (double nu : {0.0, 0.01, 0.1}) {
            cases.push_back({mu, nu});
        }
    }
    return cases;
}

SweepReport viscosity_sweep(const InitialData& init, const PhysParams& base_params,
                            const std::vector<double>& nu_list, bool mollify,
                            const SweepOptions& options)
{
    init.validate();
    if (nu_list.empty()) {
        throw ConstraintViolation("nu_list", "[]", "at least one entry");
    }
    for (std::size_t k = 0; k < nu_list.size(); ++k) {
        if (!(nu_list[k] > 0.0)) {
            throw ConstraintViolation("nu_list", str(nu_list[k]), "> 0");
        }
        if (k > 0 && !(nu_list[k] < nu_list[k - 1])) {
            throw ConstraintViolation("nu_list", str(nu_list[k]), "strictly decreasing");
        }
    }
    if (!(options.output_dt > 0.0)) {
        throw ConstraintViolation("output_dt", str(options.output_dt), "> 0");
    }

    const GridPtr& grid = init.u0.grid_ptr();
    std::vector<long> indices(nu_list.size(), 0);
    if (mollify) {
        for (std::size_t k = 0; k < nu_list.size(); ++k) {
            const double inv = 1.0 / nu_list[k];
            const long n = std::lround(inv);
            if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-9 * inv) {
                throw ConstraintViolation("nu_list", str(nu_list[k]),
                                          "1/nu must be an integer mollifier index");
            }
            squeeze_factor(0.5 * grid->length(), n);
            indices[k] = n;
        }
    }

    const auto stride = static_cast<std::size_t>(
        std::max(1.0, std::ceil(options.output_dt / base_params.dt - 1e-9)));
    PhysParams common = base_params;
    common.dt = options.output_dt / static_cast<double>(stride);
    if (common.dt > common.t_end) {
        common.dt = common.t_end;
    }
    common.validate();

    SweepReport report;
    report.nu_list = nu_list;
    report.a = grid->a();
    report.b = grid->b();
    report.n_cells = grid->n_cells();
    report.dt = common.dt;
    report.t_end = common.t_end;
    report.data_tag = options.data_tag;
    for (const auto& tf : default_test_functions(grid)) {
        report.test_names.push_back(tf.name);
    }
    report.branches.resize(nu_list.size());

    parallel_for(nu_list.size(), resolve_threads(options.threads), [&](std::size_t k) {
        SweepBranch& branch = report.branches[k];
        branch.nu = nu_list[k];
        branch.n = indices[k];
        try {
            InitialData data = init;
            if (mollify) {
                MollifiedFamily fam = thermo1d::mollify(init, indices[k]);
                data.u1 = std::move(fam.u1_n);
                data.theta0 = std::move(fam.theta0_n);
            }
            branch.nu_h2_proxy = branch.nu * l2_norm(d2(data.u1));
            PhysParams params = common;
            params.nu = branch.nu;
            CouplingObserver coupling(default_test_functions(grid));
            EnergyLedger ledger;
            Observer* observers[] = {&coupling, &ledger};
            RunResult result = run(data, params, {}, observers, RunOptions{stride, 10});
            const CouplingRow& last = coupling.measure().rows().back();
            branch.pairings = last.pairing;
            branch.pairings_cum = last.cumulative;
            branch.final_t = result.final_state.t;
            branch.min_theta = result.min_theta;
            branch.max_abs_residual = ledger.max_abs_residual();
            branch.picard_iterations = result.total_picard_iterations;
            branch.snapshots = std::move(result.snapshots);
            branch.ok = true;
        } catch (const Error& e) {
            branch.ok = false;
            branch.error = e.what();
        }
    });

    const SweepBranch* prev = nullptr;
    for (const SweepBranch& branch : report.branches) {
        if (!branch.ok) {
            continue;
        }
        if (prev != nullptr && prev->snapshots.size() == branch.snapshots.size()) {
            SweepPair pair{prev->nu, branch.nu, 0.0, 0.0, 0.0};
            for (std::size_t s = 0; s < branch.snapshots.size(); ++s) {
                const SimState& hi = prev->snapshots[s];
                const SimState& lo = branch.snapshots[s];
                pair.dist_u = std::max(pair.dist_u, l2_norm(hi.u - lo.u));
                pair.dist_v = std::max(pair.dist_v, l2_norm(hi.v - lo.v));
                pair.dist_theta = std::max(pair.dist_theta, l2_norm(hi.theta - lo.theta));
            }
            report.pairs.push_back(pair);
        }
        prev = &branch;
    }
    return report;
}

ExactSolution standard_mms_pair(double mu, double nu)
{
    // u = sin(pi x) sin t, theta = 2 + cos(pi x) cos t.
    //   u_tt = -sin(pi x) sin t,  u_xx = -pi^2 sin(pi x) sin t,
    //   u_txx = -pi^2 sin(pi x) cos t,  theta_x = -pi sin(pi x) cos t
    //   f_u = u_tt - u_xx - nu u_txx + mu theta_x
    //       = (pi^2 - 1) sin(pi x) sin t + (nu pi^2 - mu pi) sin(pi x) cos t
    //   theta_t = -cos(pi x) sin t,  theta_xx = -pi^2 cos(pi x) cos t,
    //   u_tx = pi cos(pi x) cos t
    //   f_theta = theta_t - theta_xx + mu theta u_tx
    //           = -cos(pi x) sin t + pi^2 cos(pi x) cos t
    //             + mu pi cos(pi x) cos t (2 + cos(pi x) cos t)
    ExactSolution e;
    e.a = 0.0;
    e.b = 1.0;
    e.u = [](double t, double x) { return std::sin(kPi * x) * std::sin(t); };
    e.v = [](double t, double x) { return std::sin(kPi * x) * std::cos(t); };
    e.theta = [](double t, double x) { return 2.0 + std::cos(kPi * x) * std::cos(t); };
    e.theta_x = [](double t, double x) { return -kPi * std::sin(kPi * x) * std::cos(t); };
    e.f_u = [mu, nu](double t, double x) {
        const double s = std::sin(kPi * x);
        return (kPi * kPi - 1.0) * s * std::sin(t) + (nu * kPi * kPi - mu * kPi) * s * std::cos(t);
    };
    e.f_theta = [mu](double t, double x) {
        const double c = std::cos(kPi * x);
        const double ct = std::cos(t);
        return -c * std::sin(t) + kPi * kPi * c * ct + mu * kPi * c * ct * (2.0 + c * ct);
    };
    return e;
}

ExactSolution rest_mms_pair(double level)
{
    ExactSolution e;
    auto zero = [](double, double) { return 0.0; };
    e.u = zero;
    e.v = zero;
    e.theta = [level](double, double) { return level; };
    e.theta_x = zero;
    e.f_u = zero;
    e.f_theta = zero;
    return e;
}

namespace {

void check_exact(const ExactSolution& e)
{
    constexpr double tol = 1e-12;
    auto fail = [](const std::string& what, double value) {
        throw IncompatibleExactSolution("IncompatibleExactSolution: " + what + " = " + str(value));
    };
    for (double x : {e.a, e.b}) {
        if (std::abs(e.u(0.0, x)) > tol) {
            fail("u(0, " + str(x) + ")", e.u(0.0, x));
        }
        if (std::abs(e.v(0.0, x)) > tol) {
            fail("u_t(0, " + str(x) + ")", e.v(0.0, x));
        }
        if (std::abs(e.theta_x(0.0, x)) > tol) {
            fail("theta_x(0, " + str(x) + ")", e.theta_x(0.0, x));
        }
    }
}

struct MmsRun {
    double error_u = 0.0;
    double error_theta = 0.0;
};

MmsRun run_mms(const ExactSolution& exact, const PhysParams& base, int n_cells, double dt)
{
    const GridPtr grid = make_grid(exact.a, exact.b, n_cells);
    auto at = [](const SpaceTimeFn& f, double t) { return [&f, t](double x) { return f(t, x); }; };
    InitialData init{Field::sample(grid, at(exact.u, 0.0), Boundary::DirichletZero),
                     Field::sample(grid, at(exact.v, 0.0), Boundary::DirichletZero),
                     Field::sample(grid, at(exact.theta, 0.0), Boundary::NeumannZero)};
    PhysParams params = base;
    params.dt = dt;
    const Forcing forcing{exact.f_u, exact.f_theta};
    const RunResult result = run(init, params, forcing, {}, RunOptions{0, 10});
    const SimState& s = result.final_state;
    const Field u_ref = Field::sample(grid, at(exact.u, s.t), Boundary::DirichletZero);
    const Field theta_ref = Field::sample(grid, at(exact.theta, s.t), Boundary::NeumannZero);
    return MmsRun{l2_norm(s.u - u_ref), l2_norm(s.theta - theta_ref)};
}

void fill_orders(ConvergenceTable& table, double ratio_of_refinement)
{
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        ConvergenceRow& row = table.rows[k];
        if (k == 0) {
            row.order_u = row.order_theta = row.observed_order = kNaN;
            continue;
        }
        const ConvergenceRow& prev = table.rows[k - 1];
        row.order_u = order(prev.error_u_l2, row.error_u_l2, ratio_of_refinement);
        row.order_theta = order(prev.error_theta_l2, row.error_theta_l2, ratio_of_refinement);
        row.observed_order = std::min(row.order_u, row.order_theta);
        if (std::isnan(row.order_u) || std::isnan(row.order_theta)) {
            row.observed_order = kNaN;
        }
    }
}

}  // namespace

ConvergenceTable mms_verify(const ExactSolution& exact, const PhysParams& params,
                            const std::vector<int>& n_list, double dt_factor)
{
    check_exact(exact);
    for (std::size_t k = 1; k < n_list.size(); ++k) {
        if (n_list[k] != 2 * n_list[k - 1]) {
            throw ConstraintViolation("n_list", std::to_string(n_list[k]), "doubling between rows");
        }
    }
    if (!(dt_factor > 0.0)) {
        throw ConstraintViolation("dt_factor", str(dt_factor), "> 0");
    }
    ConvergenceTable table;
    table.rows.resize(n_list.size());
    parallel_for(n_list.size(), branch_threads(), [&](std::size_t k) {
        const double h = (exact.b - exact.a) / n_list[k];
        const double target = dt_factor * h * h;
        const double steps = std::max(1.0, std::ceil(params.t_end / target - 1e-9));
        const double dt = params.t_end / steps;
        const MmsRun r = run_mms(exact, params, n_list[k], dt);
        table.rows[k] = ConvergenceRow{n_list[k], dt, r.error_u, r.error_theta, 0.0, 0.0, 0.0};
    });
    fill_orders(table, 2.0);
    return table;
}

ConvergenceTable mms_temporal(const ExactSolution& exact, const PhysParams& params, int n_cells,
                              const std::vector<double>& dt_list)
{
    check_exact(exact);
    for (std::size_t k = 0; k < dt_list.size(); ++k) {
        if (!(dt_list[k] > 0.0)) {
            throw ConstraintViolation("dt_list", str(dt_list[k]), "> 0");
        }
        if (k > 0 && std::abs(dt_list[k] * 2.0 - dt_list[k - 1]) > 1e-12 * dt_list[k - 1]) {
            throw ConstraintViolation("dt_list", str(dt_list[k]), "halving between rows");
        }
    }
    ConvergenceTable table;
    table.rows.resize(dt_list.size());
    parallel_for(dt_list.size(), branch_threads(), [&](std::size_t k) {
        const MmsRun r = run_mms(exact, params, n_cells, dt_list[k]);
        table.rows[k] = ConvergenceRow{n_cells, dt_list[k], r.error_u, r.error_theta, 0.0, 0.0, 0.0};
    });
    fill_orders(table, 2.0);
    return table;
}

StabilityReport stability_experiment(const InitialData& init, const std::vector<double>& deltas,
                                     const PhysParams& params, PerturbTarget target,
                                     unsigned threads)
{
    init.validate();
    params.validate();
    const GridPtr& grid = init.u0.grid_ptr();
    const double scale = std::max(
        1.0, target == PerturbTarget::Theta0 ? norms(init.theta0).linf : norms(init.u1).linf);
    for (double d : deltas) {
        if (!(d >= 0.0)) {
            throw ConstraintViolation("delta", str(d), ">= 0");
        }
        if (d > 1e-2 * scale) {
            throw ConstraintViolation("delta", str(d), "<= 1e-2 of the data magnitude");
        }
    }

    const Field shape = target == PerturbTarget::Theta0
                            ? Field::sample(grid,
                                            [&](double x) {
                                                return std::cos(kPi * (x - grid->a()) / grid->length());
                                            },
                                            Boundary::NeumannZero)
                            : make_profile(SinePacket{1.0, 1}, grid, Boundary::DirichletZero);

    // Slot 0 is the unperturbed run.
    std::vector<RunResult> runs(deltas.size() + 1);
    std::vector<double> residuals(runs.size(), 0.0);
    parallel_for(runs.size(), resolve_threads(threads), [&](std::size_t k) {
        InitialData data = init;
        if (k > 0) {
            Field& f = target == PerturbTarget::Theta0 ? data.theta0 : data.u1;
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] += deltas[k - 1] * shape[i];
            }
            f.enforce_bc();
        }
        EnergyLedger ledger;
        Observer* observers[] = {&ledger};
        runs[k] = run(data, params, {}, observers, RunOptions{1, 10});
        residuals[k] = ledger.max_abs_residual();
    });

    StabilityReport report;
    report.target = target;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        StabilityRow row;
        row.delta = deltas[k];
        row.history = compare_runs(runs[k + 1], runs[0]);
        const DifferenceRow& last = row.history.back();
        row.final_dv = last.dv_l2;
        row.final_dux = last.dux_l2;
        row.final_dtheta = last.dtheta_l2;
        row.final_dtheta_x_cum = last.dtheta_x_cum;
        row.final_difference = last.dv_l2 + last.dux_l2 + last.dtheta_l2;
        const RunResult& perturbed = runs[k + 1];
        row.final_t = perturbed.final_state.t;
        row.min_theta = perturbed.min_theta;
        row.max_abs_residual = residuals[k + 1];
        row.picard_iterations = perturbed.total_picard_iterations;
        for (std::size_t s = 0; s < row.history.size(); ++s) {
            const DifferenceRow& r = row.history[s];
            if (r.dtheta_x_cum > 0.0) {
                row.k_ratio = std::max(row.k_ratio, r.dv_l2 / r.dtheta_x_cum);
            }
            if (s > 0 && row.history[s - 1].dtheta_l2 > 0.0 && r.dtheta_l2 > 0.0) {
                row.max_growth_jump =
                    std::max(row.max_growth_jump, r.dtheta_l2 / row.history[s - 1].dtheta_l2);
            }
        }
        if (row.delta > 0.0 && row.final_difference > 0.0) {
            xs.push_back(std::log(row.delta));
            ys.push_back(std::log(row.final_difference));
        }
        report.rows.push_back(std::move(row));
    }

    report.slope = kNaN;
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return report;
}

}  // namespace thermo1d
