#pragma once

#include "thermo1d/diagnostics.hpp"
#include "thermo1d/initial_data.hpp"
#include "thermo1d/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace thermo1d {

/// Branch parallelism: THERMO1D_THREADS if set to a positive integer,
/// otherwise the number of hardware threads.
unsigned branch_threads();

/// Runs fn(0..count-1) on at most `threads` workers. Exceptions escape from
/// the lowest failing index after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// u0 = 0.5 sin(pi s), u1 = 0.5 bump, theta0 = 1 + cos(pi s).
InitialData standard_packet_data(const GridPtr& grid);

/// mu, nu, t_end as given; dt = h/4 and default Picard settings.
PhysParams default_params(const Grid& grid, double mu, double nu, double t_end);

struct SuiteCase {
    double mu = 0.0;
    double nu = 0.0;
};

/// mu in {0, 0.5, 1, 2} x nu in {0, 0.01, 0.1}.
std::vector<SuiteCase> standard_suite();

// ---------------------------------------------------------------------------
// Vanishing-viscosity sweep

struct SweepOptions {
    double output_dt = 0.01;  ///< shared output grid across branches
    unsigned threads = 0;     ///< 0: branch_threads()
    std::string data_tag = "custom";
};

struct SweepBranch {
    double nu = 0.0;
    long n = 0;  ///< mollifier index 1/nu, 0 when data are not mollified
    bool ok = false;
    std::string error;
    std::vector<double> pairings;       ///< <v d1 theta, psi> at t_end, per test function
    std::vector<double> pairings_cum;   ///< time-integrated pairings at t_end
    double nu_h2_proxy = 0.0;           ///< nu |d2 u1^n|, reported only
    double final_t = 0.0;
    double min_theta = 0.0;
    double max_abs_residual = 0.0;      ///< energy-ledger residual
    std::size_t picard_iterations = 0;
    std::vector<SimState> snapshots;    ///< on the shared output grid
};

struct SweepPair {
    double nu_hi = 0.0;
    double nu_lo = 0.0;
    double dist_u = 0.0;  ///< sup over output times of |u_hi - u_lo|_L2
    double dist_v = 0.0;
    double dist_theta = 0.0;
};

struct SweepReport {
    std::vector<double> nu_list;
    std::vector<std::string> test_names;
    std::vector<SweepBranch> branches;  ///< ordered as nu_list
    std::vector<SweepPair> pairs;       ///< consecutive successful branches
    double a = 0.0;
    double b = 0.0;
    int n_cells = 0;
    double dt = 0.0;  ///< effective dt, divides output_dt
    double t_end = 0.0;
    std::string data_tag;
};

/// Independent runs for every nu (strictly decreasing, positive). With
/// mollify = true each branch uses data regularized at n = 1/nu. Branch
/// failures are recorded in the report and do not stop other branches.
SweepReport viscosity_sweep(const InitialData& init, const PhysParams& base_params,
                            const std::vector<double>& nu_list, bool mollify,
                            const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Manufactured solutions

using SpaceTimeFn = std::function<double(double t, double x)>;

struct ExactSolution {
    double a = 0.0;
    double b = 1.0;
    SpaceTimeFn u;
    SpaceTimeFn v;  ///< u_t
    SpaceTimeFn theta;
    SpaceTimeFn theta_x;
    SpaceTimeFn f_u;
    SpaceTimeFn f_theta;
};

/// u = sin(pi x) sin t, theta = 2 + cos(pi x) cos t on (0, 1), with the
/// sources that make the pair solve the regularized system for mu, nu.
ExactSolution standard_mms_pair(double mu, double nu);

/// u = 0, theta = level: no sources needed.
ExactSolution rest_mms_pair(double level);

struct ConvergenceRow {
    int n_cells = 0;
    double dt = 0.0;
    double error_u_l2 = 0.0;
    double error_theta_l2 = 0.0;
    double order_u = 0.0;  ///< against the previous row, NaN on the first
    double order_theta = 0.0;
    double observed_order = 0.0;  ///< min(order_u, order_theta)
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

/// Spatial study: n_cells doubling, dt = dt_factor h^2 (adjusted to divide t_end).
ConvergenceTable mms_verify(const ExactSolution& exact, const PhysParams& params,
                            const std::vector<int>& n_list, double dt_factor = 1.0);

/// Temporal study on a fixed grid with the given time steps (each halving).
ConvergenceTable mms_temporal(const ExactSolution& exact, const PhysParams& params, int n_cells,
                              const std::vector<double>& dt_list);

// ---------------------------------------------------------------------------
// Continuous dependence

enum class PerturbTarget { Theta0, U1 };

struct StabilityRow {
    double delta = 0.0;
    double final_dv = 0.0;
    double final_dux = 0.0;
    double final_dtheta = 0.0;
    double final_dtheta_x_cum = 0.0;
    double final_difference = 0.0;  ///< final_dv + final_dux + final_dtheta
    double k_ratio = 0.0;           ///< max_t |dv| / cumulative |d1 dtheta|
    double max_growth_jump = 0.0;   ///< max ratio |dtheta|_{k+1} / |dtheta|_k over nonzero pairs
    DifferenceHistory history;
    // Summary of the perturbed run.
    double final_t = 0.0;
    double min_theta = 0.0;
    double max_abs_residual = 0.0;
    std::size_t picard_iterations = 0;
};

struct StabilityReport {
    PerturbTarget target = PerturbTarget::Theta0;
    std::vector<StabilityRow> rows;  ///< ordered as the deltas given
    double slope = 0.0;              ///< least squares of log difference vs log delta (delta > 0)
};

/// Perturbs theta0 by delta cos(pi s) or u1 by delta sin(pi s), runs base and
/// perturbed problems and compares them.
StabilityReport stability_experiment(const InitialData& init, const std::vector<double>& deltas,
                                     const PhysParams& params, PerturbTarget target,
                                     unsigned threads = 0);

}  // namespace thermo1d
