#pragma once

#include "thermo1d/field.hpp"
#include "thermo1d/operators.hpp"
#include "thermo1d/solver.hpp"

#include <span>
#include <string>
#include <vector>

namespace thermo1d {

struct EnergyTerms {
    double kinetic = 0.0;     ///< 1/2 |v|^2
    double elastic = 0.0;     ///< 1/2 |d1 u|^2
    double thermal_l1 = 0.0;  ///< |theta|_L1

    double total() const noexcept { return kinetic + elastic + thermal_l1; }
};

EnergyTerms energy_terms(const SimState& state);

struct EnergyRow {
    std::size_t step = 0;
    double t = 0.0;
    double kinetic = 0.0;
    double elastic = 0.0;
    double thermal_l1 = 0.0;
    double dissipation_cum = 0.0;  ///< sum of dt nu |d1 v_new|^2
    double residual = 0.0;         ///< E(t) + dissipation_cum - E(0)
    /// Heat-content bookkeeping: (M' - M) + dt mu <theta, d1 v>_w with the
    /// exchange rate taken at the start of the step (M = sum w theta).
    double exchange_defect = 0.0;
};

/// Running audit of the energy balance
///   d/dt (1/2|u_t|^2 + 1/2|u_x|^2 + |theta|_L1) + nu |u_tx|^2 = 0.
class EnergyLedger : public Observer {
public:
    void begin(const SimState& initial, const PhysParams& params) override;
    void on_step(const StepRecord& record) override;

    /// Appends the row for `next`; `prev` must be the last audited state.
    const EnergyRow& audit(const SimState& prev, const SimState& next, double mu, double nu,
                           double dt);

    const std::vector<EnergyRow>& rows() const noexcept { return rows_; }
    double initial_energy() const noexcept { return e0_; }
    double max_abs_residual() const noexcept;
    double max_abs_exchange_defect() const noexcept;

private:
    std::vector<EnergyRow> rows_;
    double e0_ = 0.0;
    double mu_ = 0.0;
    double nu_ = 0.0;
};

struct NormRow {
    std::size_t step = 0;
    double t = 0.0;
    NormSet u;
    NormSet v;
    NormSet theta;
    double theta_t_l2 = 0.0;   ///< |(theta' - theta)/dt|
    double u_tt_l2 = 0.0;      ///< |(v' - v)/dt|
    double theta_tx_l2 = 0.0;  ///< |d1 (theta' - theta)/dt|
};

/// Time series of norms; the time-derivative columns are backward differences
/// of consecutive accepted states and are 0 on the initial row.
class NormHistory : public Observer {
public:
    void begin(const SimState& initial, const PhysParams& params) override;
    void on_step(const StepRecord& record) override;

    const std::vector<NormRow>& rows() const noexcept { return rows_; }

private:
    std::vector<NormRow> rows_;
};

struct BoundCheck {
    std::string name;
    double observed = 0.0;
    double allowed = 0.0;
    double ratio = 0.0;  ///< observed / allowed (0 when both vanish)
    bool pass = true;
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    double gronwall_constant = 0.0;
    bool all_pass() const noexcept;
};

/// Checks sup-in-time bounds implied by the energy balance (each of |v|,
/// |d1 u|, |theta|_L1 and the total is dominated by E(0)) and the growth
/// bound |theta(t)| <= exp(C t) |theta0| with C = 2 mu max(sqrt 2, sqrt(1/(b-a))).
/// Never throws on a failed bound; it is reported.
BoundReport bound_monitor(const NormHistory& history, const InitialData& init,
                          const PhysParams& params);

/// Relative/absolute headroom for roundoff in bound_monitor.
inline constexpr double kBoundRelTol = 1e-12;
inline constexpr double kBoundAbsTol = 1e-14;

struct TestFunction {
    std::string name;
    Field psi;
};

/// {1, x, sin(pi s), centered bump}.
std::vector<TestFunction> default_test_functions(const GridPtr& grid);

struct CouplingRow {
    double t = 0.0;
    std::vector<double> pairing;      ///< <v d1 theta, psi>_w
    std::vector<double> transported;  ///< -<v theta, d1 psi>_w - <d1 v theta, psi>_w
    std::vector<double> cumulative;   ///< time integral of pairing up to t
    double l1 = 0.0;                  ///< |v d1 theta|_L1
    double l2t_l1x_bound = 0.0;       ///< sqrt(sum dt l1^2) up to t
};

/// Discrete approximants of the defect measure generated by u_t theta_x,
/// tested against a fixed family of functions.
class CouplingMeasure {
public:
    /// Needs at least two test functions, one of them identically 1.
    explicit CouplingMeasure(std::vector<TestFunction> test_functions);

    /// Records `state` reached after a step of size dt (dt = 0 for the first state).
    void add(const SimState& state, double dt);

    const std::vector<TestFunction>& test_functions() const noexcept { return tests_; }
    const std::vector<CouplingRow>& rows() const noexcept { return rows_; }

private:
    std::vector<TestFunction> tests_;
    std::vector<CouplingRow> rows_;
    double l2_acc_ = 0.0;
};

CouplingMeasure coupling_accumulate(std::span<const SimState> states,
                                    std::vector<TestFunction> test_functions);

class CouplingObserver : public Observer {
public:
    explicit CouplingObserver(std::vector<TestFunction> test_functions);
    void begin(const SimState& initial, const PhysParams& params) override;
    void on_step(const StepRecord& record) override;
    const CouplingMeasure& measure() const noexcept { return measure_; }

private:
    CouplingMeasure measure_;
};

struct DifferenceRow {
    double t = 0.0;
    double dv_l2 = 0.0;
    double dux_l2 = 0.0;
    double dtheta_l2 = 0.0;
    double dtheta_x_cum = 0.0;  ///< |d1 (theta_A - theta_B)| in L2 over (0, t)
};

using DifferenceHistory = std::vector<DifferenceRow>;

/// Snapshot-by-snapshot differences of two runs on the same grid and time
/// levels. Throws GridMismatch otherwise.
DifferenceHistory compare_runs(const RunResult& a, const RunResult& b);

}  // namespace thermo1d
