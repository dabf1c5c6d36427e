#include "thermo1d/diagnostics.hpp"

#include "thermo1d/errors.hpp"
#include "thermo1d/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace thermo1d {

EnergyTerms energy_terms(const SimState& state)
{
    EnergyTerms e;
    const double v2 = l2_norm(state.v);
    const double ux2 = l2_norm(d1(state.u));
    e.kinetic = 0.5 * v2 * v2;
    e.elastic = 0.5 * ux2 * ux2;
    e.thermal_l1 = norms(state.theta).l1;
    return e;
}

void EnergyLedger::begin(const SimState& initial, const PhysParams& params)
{
    const EnergyTerms e = energy_terms(initial);
    e0_ = e.total();
    mu_ = params.mu;
    nu_ = params.nu;
    rows_.clear();
    rows_.push_back(EnergyRow{0, initial.t, e.kinetic, e.elastic, e.thermal_l1, 0.0, 0.0, 0.0});
}

void EnergyLedger::on_step(const StepRecord& record)
{
    audit(record.prev, record.next, mu_, nu_, record.dt);
}

const EnergyRow& EnergyLedger::audit(const SimState& prev, const SimState& next, double mu,
                                     double nu, double dt)
{
    const EnergyTerms e = energy_terms(next);
    const double vx = l2_norm(d1(next.v));
    const double previous_cum = rows_.empty() ? 0.0 : rows_.back().dissipation_cum;

    EnergyRow row;
    row.step = rows_.empty() ? 0 : rows_.back().step + 1;
    row.t = next.t;
    row.kinetic = e.kinetic;
    row.elastic = e.elastic;
    row.thermal_l1 = e.thermal_l1;
    row.dissipation_cum = previous_cum + dt * nu * vx * vx;
    row.residual = (e.total() + row.dissipation_cum) - e0_;
    const double exchange_rate = -mu * inner(prev.theta, d1(prev.v));
    row.exchange_defect = (integrate(next.theta) - integrate(prev.theta)) - dt * exchange_rate;
    rows_.push_back(row);
    return rows_.back();
}

double EnergyLedger::max_abs_residual() const noexcept
{
    double m = 0.0;
    for (const auto& r : rows_) {
        m = std::max(m, std::abs(r.residual));
    }
    return m;
}

double EnergyLedger::max_abs_exchange_defect() const noexcept
{
    double m = 0.0;
    for (const auto& r : rows_) {
        m = std::max(m, std::abs(r.exchange_defect));
    }
    return m;
}

void NormHistory::begin(const SimState& initial, const PhysParams& /*params*/)
{
    rows_.clear();
    NormRow row;
    row.t = initial.t;
    row.u = norms(initial.u);
    row.v = norms(initial.v);
    row.theta = norms(initial.theta);
    rows_.push_back(row);
}

void NormHistory::on_step(const StepRecord& record)
{
    const SimState& prev = record.prev;
    const SimState& next = record.next;
    NormRow row;
    row.step = record.step;
    row.t = next.t;
    row.u = norms(next.u);
    row.v = norms(next.v);
    row.theta = norms(next.theta);
    const Field dtheta = next.theta - prev.theta;
    row.theta_t_l2 = l2_norm(dtheta) / record.dt;
    row.u_tt_l2 = l2_norm(next.v - prev.v) / record.dt;
    row.theta_tx_l2 = l2_norm(d1(dtheta)) / record.dt;
    rows_.push_back(row);
}

bool BoundReport::all_pass() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

namespace {

BoundCheck make_check(std::string name, double observed, double allowed)
{
    BoundCheck c;
    c.name = std::move(name);
    c.observed = observed;
    c.allowed = allowed;
    c.ratio = allowed > 0.0 ? observed / allowed : (observed > 0.0 ? INFINITY : 0.0);
    c.pass = observed <= allowed * (1.0 + kBoundRelTol) + kBoundAbsTol;
    return c;
}

}  // namespace

BoundReport bound_monitor(const NormHistory& history, const InitialData& init,
                          const PhysParams& params)
{
    const SimState s0{0.0, init.u0, init.u1, init.theta0};
    const double e0 = energy_terms(s0).total();
    const double theta0_l2 = l2_norm(init.theta0);
    const double length = init.theta0.grid().length();

    BoundReport report;
    report.gronwall_constant =
        2.0 * params.mu * std::max(std::numbers::sqrt2, std::sqrt(1.0 / length));

    double sup_v = 0.0;
    double sup_ux = 0.0;
    double sup_theta_l1 = 0.0;
    double sup_energy = 0.0;
    BoundCheck growth;
    bool growth_ok = true;
    double worst = -1.0;
    for (const NormRow& row : history.rows()) {
        sup_v = std::max(sup_v, row.v.l2);
        sup_ux = std::max(sup_ux, row.u.h1_semi);
        sup_theta_l1 = std::max(sup_theta_l1, row.theta.l1);
        sup_energy = std::max(sup_energy, 0.5 * row.v.l2 * row.v.l2 +
                                              0.5 * row.u.h1_semi * row.u.h1_semi + row.theta.l1);
        const double allowed = std::exp(report.gronwall_constant * row.t) * theta0_l2;
        BoundCheck c = make_check("theta_l2_gronwall", row.theta.l2, allowed);
        growth_ok = growth_ok && c.pass;
        if (c.ratio > worst) {
            worst = c.ratio;
            growth = std::move(c);
        }
    }
    growth.pass = growth_ok;
    const double sqrt_2e0 = std::sqrt(2.0 * e0);
    report.checks.push_back(make_check("energy_sup", sup_energy, e0));
    report.checks.push_back(make_check("v_l2_sup", sup_v, sqrt_2e0));
    report.checks.push_back(make_check("u_x_l2_sup", sup_ux, sqrt_2e0));
    report.checks.push_back(make_check("theta_l1_sup", sup_theta_l1, e0));
    report.checks.push_back(growth);
    return report;
}

std::vector<TestFunction> default_test_functions(const GridPtr& grid)
{
    std::vector<TestFunction> out;
    out.push_back({"one", Field::sample(grid, [](double) { return 1.0; }, Boundary::NeumannZero)});
    out.push_back({"x", Field::sample(grid, [](double x) { return x; }, Boundary::NeumannZero)});
    out.push_back({"sin", make_profile(SinePacket{1.0, 1}, grid, Boundary::DirichletZero)});
    out.push_back({"bump", make_profile(Bump{}, grid, Boundary::NeumannZero)});
    return out;
}

CouplingMeasure::CouplingMeasure(std::vector<TestFunction> test_functions)
    : tests_(std::move(test_functions))
{
    if (tests_.size() < 2) {
        throw ValidationError("CouplingMeasure: need at least two test functions");
    }
    const bool has_one = std::any_of(tests_.begin(), tests_.end(), [](const TestFunction& t) {
        const auto v = t.psi.values();
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; });
    });
    if (!has_one) {
        throw ValidationError("CouplingMeasure: the test functions must include psi = 1");
    }
}

void CouplingMeasure::add(const SimState& state, double dt)
{
    const Grid& g = state.theta.grid();
    const Field theta_x = d1(state.theta);
    const Field v_x = d1(state.v);
    const std::size_t n = g.n_nodes();

    std::vector<double> product(n);
    std::vector<double> v_theta(n);
    std::vector<double> vx_theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        product[i] = state.v[i] * theta_x[i];
        v_theta[i] = state.v[i] * state.theta[i];
        vx_theta[i] = v_x[i] * state.theta[i];
    }

    CouplingRow row;
    row.t = state.t;
    const auto w = g.weights();
    for (std::size_t i = 0; i < n; ++i) {
        row.l1 += w[i] * std::abs(product[i]);
    }
    l2_acc_ += dt * row.l1 * row.l1;
    row.l2t_l1x_bound = std::sqrt(l2_acc_);
    for (std::size_t j = 0; j < tests_.size(); ++j) {
        const Field& psi = tests_[j].psi;
        require_same_grid(g, psi.grid());
        const Field psi_x = d1(psi);
        const double pairing = inner(g, product, psi.values());
        row.pairing.push_back(pairing);
        row.transported.push_back(-inner(g, v_theta, psi_x.values()) -
                                  inner(g, vx_theta, psi.values()));
        const double before = rows_.empty() ? 0.0 : rows_.back().cumulative[j];
        row.cumulative.push_back(before + dt * pairing);
    }
    rows_.push_back(std::move(row));
}

CouplingMeasure coupling_accumulate(std::span<const SimState> states,
                                    std::vector<TestFunction> test_functions)
{
    CouplingMeasure m(std::move(test_functions));
    for (std::size_t k = 0; k < states.size(); ++k) {
        m.add(states[k], k == 0 ? 0.0 : states[k].t - states[k - 1].t);
    }
    return m;
}

CouplingObserver::CouplingObserver(std::vector<TestFunction> test_functions)
    : measure_(std::move(test_functions))
{
}

void CouplingObserver::begin(const SimState& initial, const PhysParams& /*params*/)
{
    measure_ = CouplingMeasure(measure_.test_functions());
    measure_.add(initial, 0.0);
}

void CouplingObserver::on_step(const StepRecord& record)
{
    measure_.add(record.next, record.dt);
}

DifferenceHistory compare_runs(const RunResult& a, const RunResult& b)
{
    if (a.snapshots.empty() || b.snapshots.empty()) {
        throw ValidationError("compare_runs: runs carry no snapshots");
    }
    require_same_grid(a.snapshots.front().u.grid(), b.snapshots.front().u.grid());
    if (a.snapshots.size() != b.snapshots.size()) {
        std::ostringstream os;
        os << "GridMismatch: runs have " << a.snapshots.size() << " and " << b.snapshots.size()
           << " snapshots";
        throw GridMismatch(os.str());
    }
    DifferenceHistory out;
    out.reserve(a.snapshots.size());
    double cum = 0.0;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const SimState& sa = a.snapshots[k];
        const SimState& sb = b.snapshots[k];
        if (std::abs(sa.t - sb.t) > 1e-12 * std::max(1.0, std::abs(sa.t))) {
            std::ostringstream os;
            os.precision(17);
            os << "GridMismatch: snapshot " << k << " at t=" << sa.t << " vs t=" << sb.t;
            throw GridMismatch(os.str());
        }
        DifferenceRow row;
        row.t = sa.t;
        row.dv_l2 = l2_norm(sa.v - sb.v);
        row.dux_l2 = l2_norm(d1(sa.u - sb.u));
        const Field dtheta = sa.theta - sb.theta;
        row.dtheta_l2 = l2_norm(dtheta);
        if (k > 0) {
            const double gx = l2_norm(d1(dtheta));
            cum += (sa.t - a.snapshots[k - 1].t) * gx * gx;
        }
        row.dtheta_x_cum = std::sqrt(cum);
        out.push_back(row);
    }
    return out;
}

}  // namespace thermo1d
