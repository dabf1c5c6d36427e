#include "thermo1d/solver.hpp"

#include "thermo1d/errors.hpp"
#include "thermo1d/operators.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace thermo1d {

namespace {

std::string str(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double max_abs_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

void PhysParams::validate() const
{
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ConstraintViolation("mu", str(mu), ">= 0");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw ConstraintViolation("nu", str(nu), ">= 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConstraintViolation("dt", str(dt), "> 0");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConstraintViolation("t_end", str(t_end), "> 0");
    }
    if (dt > t_end) {
        throw ConstraintViolation("dt", str(dt), "<= t_end");
    }
    if (!(picard_tol > 0.0)) {
        throw ConstraintViolation("picard_tol", str(picard_tol), "> 0");
    }
    if (picard_max < 1) {
        throw ConstraintViolation("picard_max", std::to_string(picard_max), ">= 1");
    }
    if (!(pos_tol >= 0.0)) {
        throw ConstraintViolation("pos_tol", str(pos_tol), ">= 0");
    }
}

SimState initial_state(const InitialData& init)
{
    init.validate();
    return SimState{0.0, init.u0, init.u1, init.theta0};
}

WaveResult wave_substep(const SimState& state, const Field& theta_tilde, const PhysParams& params,
                        const Forcing& forcing)
{
    require_same_grid(state.u.grid(), theta_tilde.grid());
    const Grid& g = state.u.grid();
    const std::size_t nodes = g.n_nodes();
    const std::size_t m = nodes - 2;
    const double dt = params.dt;
    const double t_new = state.t + dt;
    const double kappa = (dt * dt + params.nu * dt) / (g.h() * g.h());

    const Field uxx = d2(state.u);
    const Field force = d1(theta_tilde);

    std::vector<double> lower(m, -kappa);
    std::vector<double> diag(m, 1.0 + 2.0 * kappa);
    std::vector<double> upper(m, -kappa);
    std::vector<double> rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        double r = state.v[i] + dt * uxx[i] - dt * params.mu * force[i];
        if (forcing.f_u) {
            r += dt * forcing.f_u(t_new, g.x(i));
        }
        rhs[k] = r;
    }
    const std::vector<double> sol = tridiag_solve(lower, diag, upper, rhs);

    WaveResult out{Field(state.u.grid_ptr(), Boundary::DirichletZero),
                   Field(state.u.grid_ptr(), Boundary::DirichletZero)};
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        out.v[i] = sol[k];
        out.u[i] = state.u[i] + dt * sol[k];
    }
    return out;
}

HeatResult heat_substep(const SimState& state, const Field& v_new, const PhysParams& params,
                        const Forcing& forcing)
{
    if (v_new.bc() != Boundary::DirichletZero) {
        throw InvalidField("InvalidField: heat_substep expects a DirichletZero velocity");
    }
    require_same_grid(state.theta.grid(), v_new.grid());
    const Grid& g = state.theta.grid();
    const std::size_t n = g.n_nodes();
    const double dt = params.dt;
    const double t_new = state.t + dt;
    const double inv_h2 = 1.0 / (g.h() * g.h());
    const Field vx = d1(v_new);
    const Field theta_xx = d2(state.theta);

    // Solved for the increment theta' - theta so that a steady state gives a
    // right-hand side of exact zeros.
    std::vector<double> lower(n, -inv_h2);
    std::vector<double> diag(n);
    std::vector<double> upper(n, -inv_h2);
    std::vector<double> rhs(n);
    double vx_inf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = 1.0 / dt + 2.0 * inv_h2 + params.mu * vx[i];
        double r = theta_xx[i] - params.mu * vx[i] * state.theta[i];
        if (forcing.f_theta) {
            r += forcing.f_theta(t_new, g.x(i));
        }
        rhs[i] = r;
        vx_inf = std::max(vx_inf, std::abs(vx[i]));
    }
    // Ghost reflection doubles the inward coupling at both ends.
    upper[0] = -2.0 * inv_h2;
    lower[n - 1] = -2.0 * inv_h2;

    std::vector<double> theta_new = tridiag_solve(lower, diag, upper, rhs);
    for (std::size_t i = 0; i < n; ++i) {
        theta_new[i] += state.theta[i];
    }
    HeatResult out{Field(state.theta.grid_ptr(), std::move(theta_new), Boundary::NeumannZero), {}};
    out.stats.m_matrix = 1.0 / dt > params.mu * vx_inf;

    const double lowest = out.theta.min();
    if (lowest < -params.pos_tol) {
        throw PositivityLoss(lowest, t_new);
    }
    if (lowest < 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (out.theta[i] < 0.0) {
                out.stats.max_clamp = std::max(out.stats.max_clamp, -out.theta[i]);
                out.theta[i] = 0.0;
                ++out.stats.clamp_count;
            }
        }
    }
    return out;
}

PicardResult picard_step(const SimState& state, const PhysParams& params, const Forcing& forcing)
{
    Field theta_tilde = state.theta;
    PicardStats stats;
    for (int k = 1; k <= params.picard_max; ++k) {
        WaveResult wave = wave_substep(state, theta_tilde, params, forcing);
        HeatResult heat = heat_substep(state, wave.v, params, forcing);
        const double residual = max_abs_diff(heat.theta, theta_tilde);
        stats.residuals.push_back(residual);
        stats.iterations = k;
        if (!std::isfinite(residual)) {
            throw PicardDivergence(k, residual, state.t + params.dt);
        }
        if (params.mu == 0.0 || residual <= params.picard_tol) {
            SimState next{state.t + params.dt, std::move(wave.u), std::move(wave.v),
                          std::move(heat.theta)};
            stats.heat = heat.stats;
            return PicardResult{std::move(next), std::move(stats)};
        }
        theta_tilde = std::move(heat.theta);
    }
    throw PicardDivergence(params.picard_max, stats.residuals.back(), state.t + params.dt);
}

namespace {

class Driver {
public:
    Driver(const PhysParams& params, const Forcing& forcing, std::span<Observer* const> observers,
           const RunOptions& options, RunResult& result)
        : params_(params), forcing_(forcing), observers_(observers), options_(options),
          result_(result)
    {
    }

    void advance(SimState& state, double step, int depth)
    {
        PhysParams local = params_;
        local.dt = step;
        std::optional<PicardResult> accepted;
        std::string failure;
        try {
            accepted = picard_step(state, local, forcing_);
        } catch (const PicardDivergence& e) {
            failure = e.what();
            ++result_.rejected_picard;
        } catch (const PositivityLoss& e) {
            failure = e.what();
            ++result_.rejected_positivity;
        } catch (const NonDominantMatrix& e) {
            failure = e.what();
            ++result_.rejected_matrix;
        }
        if (!accepted) {
            if (depth >= options_.max_halvings) {
                throw AbortedRun(failure + " (after " + std::to_string(depth) + " halvings)",
                                 state.t);
            }
            advance(state, 0.5 * step, depth + 1);
            advance(state, 0.5 * step, depth + 1);
            return;
        }
        accept(state, std::move(*accepted), step, depth);
    }

private:
    void accept(SimState& state, PicardResult&& r, double step, int depth)
    {
        ++result_.accepted_steps;
        const PicardStats& s = r.stats;
        result_.total_picard_iterations += static_cast<std::size_t>(s.iterations);
        result_.max_picard_iterations = std::max(result_.max_picard_iterations, s.iterations);
        for (std::size_t k = 1; k < s.residuals.size(); ++k) {
            if (s.residuals[k - 1] > 0.0) {
                result_.max_picard_ratio =
                    std::max(result_.max_picard_ratio, s.residuals[k] / s.residuals[k - 1]);
            }
        }
        result_.clamp_count += s.heat.clamp_count;
        result_.max_clamp = std::max(result_.max_clamp, s.heat.max_clamp);
        if (!s.heat.m_matrix) {
            ++result_.m_matrix_violations;
        }
        result_.min_theta = std::min(result_.min_theta, r.state.theta.min());
        if (depth > 0) {
            result_.dt_history.push_back(DtChange{state.t, step});
        }
        const StepRecord record{result_.accepted_steps, step, state, r.state, s};
        for (Observer* obs : observers_) {
            obs->on_step(record);
        }
        state = std::move(r.state);
    }

    const PhysParams& params_;
    const Forcing& forcing_;
    std::span<Observer* const> observers_;
    const RunOptions& options_;
    RunResult& result_;
};

}  // namespace

RunResult run(const InitialData& init, const PhysParams& params, const Forcing& forcing,
              std::span<Observer* const> observers, const RunOptions& options)
{
    params.validate();
    SimState state = initial_state(init);

    RunResult result;
    result.params = params;
    result.min_theta = state.theta.min();
    result.snapshots.push_back(state);
    for (Observer* obs : observers) {
        obs->begin(state, params);
    }

    const auto macro_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.t_end / params.dt - 1e-9)));
    Driver driver(params, forcing, observers, options, result);
    for (std::size_t s = 1; s <= macro_steps; ++s) {
        const double t_start = static_cast<double>(s - 1) * params.dt;
        const double step = s == macro_steps ? params.t_end - t_start : params.dt;
        state.t = t_start;
        driver.advance(state, step, 0);
        state.t = s == macro_steps ? params.t_end : static_cast<double>(s) * params.dt;
        const bool record = options.record_every > 0 && s % options.record_every == 0;
        if (record || s == macro_steps) {
            result.snapshots.push_back(state);
        }
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace thermo1d
