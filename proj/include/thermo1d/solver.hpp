#pragma once

#include "thermo1d/field.hpp"
#include "thermo1d/initial_data.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace thermo1d {

struct PhysParams {
    double mu = 1.0;   ///< coupling constant
    double nu = 0.01;  ///< artificial viscosity
    double dt = 1e-3;
    double t_end = 1.0;
    double picard_tol = 1e-10;
    int picard_max = 50;
    double pos_tol = 1e-10;

    /// Throws ConstraintViolation on the first bad field.
    void validate() const;
};

struct SimState {
    double t = 0.0;
    Field u;      ///< displacement, DirichletZero
    Field v;      ///< velocity u_t, DirichletZero
    Field theta;  ///< temperature, NeumannZero
};

SimState initial_state(const InitialData& init);

/// Optional source terms f(t, x); empty functions mean zero.
struct Forcing {
    std::function<double(double, double)> f_u;
    std::function<double(double, double)> f_theta;
};

struct WaveResult {
    Field u;
    Field v;
};

/// Implicit damped-wave step with the temperature frozen at theta_tilde:
///   (I - (dt^2 + nu dt) D2) v' = v + dt D2 u - dt mu d1(theta_tilde) + dt f_u(t + dt)
///   u' = u + dt v'
WaveResult wave_substep(const SimState& state, const Field& theta_tilde, const PhysParams& params,
                        const Forcing& forcing = {});

struct HeatStats {
    std::size_t clamp_count = 0;  ///< nodes lifted from (-pos_tol, 0) to 0
    double max_clamp = 0.0;       ///< largest lifted magnitude
    bool m_matrix = true;         ///< 1/dt > mu |d1 v'|_inf held for this solve
};

struct HeatResult {
    Field theta;
    HeatStats stats;
};

/// Implicit heat step, linear in the new temperature:
///   (I/dt - D2_N + mu diag(d1 v')) theta' = theta / dt + f_theta(t + dt)
/// Throws PositivityLoss if min theta' < -pos_tol.
HeatResult heat_substep(const SimState& state, const Field& v_new, const PhysParams& params,
                        const Forcing& forcing = {});

struct PicardStats {
    int iterations = 0;
    std::vector<double> residuals;  ///< |theta^{k+1} - theta_tilde^k|_inf per pass
    HeatStats heat;                 ///< final heat solve
};

struct PicardResult {
    SimState state;
    PicardStats stats;
};

/// One time step as a fixed point of theta_tilde -> wave -> heat, started
/// from theta_tilde = theta(t). With mu = 0 the map ignores its argument and a
/// single pass is returned. Throws PicardDivergence after picard_max passes.
PicardResult picard_step(const SimState& state, const PhysParams& params,
                         const Forcing& forcing = {});

struct StepRecord {
    std::size_t step = 0;  ///< accepted-step counter, starting at 1
    double dt = 0.0;
    const SimState& prev;
    const SimState& next;
    const PicardStats& picard;
};

/// Receives every accepted step of a run, in order.
class Observer {
public:
    virtual ~Observer() = default;
    virtual void begin(const SimState& /*initial*/, const PhysParams& /*params*/) {}
    virtual void on_step(const StepRecord& record) = 0;
};

struct RunOptions {
    /// Store a snapshot every `record_every` macro steps (0 keeps only the
    /// initial and final states).
    std::size_t record_every = 1;
    int max_halvings = 10;
};

struct DtChange {
    double t = 0.0;   ///< start of the substep
    double dt = 0.0;  ///< size actually used
};

struct RunResult {
    SimState final_state;
    std::vector<SimState> snapshots;  ///< includes t = 0 and the final state
    std::vector<DtChange> dt_history; ///< substeps taken below the nominal dt
    std::size_t accepted_steps = 0;
    std::size_t total_picard_iterations = 0;
    int max_picard_iterations = 0;
    double max_picard_ratio = 0.0;    ///< largest residual ratio between consecutive passes
    double min_theta = 0.0;
    std::size_t clamp_count = 0;
    double max_clamp = 0.0;
    std::size_t m_matrix_violations = 0;
    // Attempts rejected and retried as two half steps, by cause.
    std::size_t rejected_picard = 0;
    std::size_t rejected_positivity = 0;
    std::size_t rejected_matrix = 0;
    PhysParams params;
};

/// Advances from t = 0 to t_end in macro steps of the nominal dt. A step
/// failing with PicardDivergence, PositivityLoss or NonDominantMatrix is
/// retried as two half steps, recursively, up to max_halvings levels; beyond
/// that AbortedRun.
RunResult run(const InitialData& init, const PhysParams& params, const Forcing& forcing = {},
              std::span<Observer* const> observers = {}, const RunOptions& options = {});

}  // namespace thermo1d
