// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "thermo1d/csv.hpp"
#include "thermo1d/diagnostics.hpp"
#include "thermo1d/errors.hpp"
#include "thermo1d/experiments.hpp"
#include "thermo1d/initial_data.hpp"
#include "thermo1d/operators.hpp"
#include "thermo1d/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace thermo1d;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr int kSuiteCells = 64;
constexpr double kSuiteEnd = 1.0;

struct SuiteRun {
    SuiteCase c;
    RunResult result;
    EnergyLedger ledger;
    NormHistory norms;
    InitialData init;
    PhysParams params;
    std::string error;
};

// The standard suite is shared by criteria 2, 5, 6 and 10.
std::vector<SuiteRun>& suite()
{
    static std::vector<SuiteRun> runs = [] {
        const auto grid = make_grid(0.0, 1.0, kSuiteCells);
        const auto cases = standard_suite();
        std::vector<SuiteRun> out(cases.size());
        parallel_for(cases.size(), branch_threads(), [&](std::size_t i) {
            SuiteRun& r = out[i];
            r.c = cases[i];
            r.init = standard_packet_data(grid);
            r.params = default_params(*grid, r.c.mu, r.c.nu, kSuiteEnd);
            Observer* obs[] = {&r.ledger, &r.norms};
            try {
                r.result = run(r.init, r.params, {}, obs);
            } catch (const Error& e) {
                r.error = e.what();
            }
        });
        return out;
    }();
    return runs;
}

std::string suite_error()
{
    for (const SuiteRun& r : suite()) {
        if (!r.error.empty()) {
            return fmt("mu=%g nu=%g failed: %s", r.c.mu, r.c.nu, r.error.c_str());
        }
    }
    return {};
}

double ledger_residual(double dt_scale)
{
    const auto grid = make_grid(0.0, 1.0, 64);
    const InitialData init = standard_packet_data(grid);
    PhysParams p = default_params(*grid, 1.0, 0.01, 1.0);
    p.dt *= dt_scale;
    EnergyLedger ledger;
    Observer* obs[] = {&ledger};
    run(init, p, {}, obs, {.record_every = 0});
    return ledger.max_abs_residual();
}

Outcome criterion1()
{
    const double coarse = ledger_residual(1.0);
    const double fine = ledger_residual(0.5);
    const double ratio = coarse / fine;

    const auto grid = make_grid(0.0, 1.0, 64);
    const InitialData rest{Field(grid, Boundary::DirichletZero), Field(grid, Boundary::DirichletZero),
                           make_profile(Constant{1.5}, grid, Boundary::NeumannZero)};
    EnergyLedger ledger;
    Observer* obs[] = {&ledger};
    run(rest, default_params(*grid, 1.0, 0.01, 1.0), {}, obs, {.record_every = 0});
    const double rest_res = ledger.max_abs_residual();

    const bool pass = ratio >= 1.7 && ratio <= 2.3 && rest_res <= 1e-14;
    return {pass, fmt("residual dt=%.3e dt/2=%.3e ratio=%.3f (want [1.7,2.3]); rest residual=%.2e",
                      coarse, fine, ratio, rest_res)};
}

Outcome criterion2()
{
    if (auto e = suite_error(); !e.empty()) {
        return {false, e};
    }
    double min_theta = INFINITY;
    std::size_t clamps_when_m = 0;
    std::size_t m_violations = 0;
    for (const SuiteRun& r : suite()) {
        min_theta = std::min(min_theta, r.result.min_theta);
        m_violations += r.result.m_matrix_violations;
        if (r.result.m_matrix_violations == 0) {
            clamps_when_m += r.result.clamp_count;
        }
    }
    const bool pass = suite().size() >= 10 && min_theta >= -1e-10 && clamps_when_m == 0;
    return {pass, fmt("%zu configs, min theta=%.3e, M-matrix violations=%zu, clamps under M-matrix=%zu",
                      suite().size(), min_theta, m_violations, clamps_when_m)};
}

double exchange_defect(double mu, double dt_scale, double& per_time_drift)
{
    const auto grid = make_grid(0.0, 1.0, 64);
    const InitialData init = standard_packet_data(grid);
    PhysParams p = default_params(*grid, mu, 0.01, 1.0);
    p.dt *= dt_scale;
    EnergyLedger ledger;
    Observer* obs[] = {&ledger};
    const RunResult r = run(init, p, {}, obs, {.record_every = 0});
    const double m0 = integrate(init.theta0);
    per_time_drift = std::abs(integrate(r.final_state.theta) - m0) / p.t_end;
    return ledger.max_abs_exchange_defect();
}

Outcome criterion3()
{
    double drift = 0.0;
    double unused = 0.0;
    const double mu0_defect = exchange_defect(0.0, 1.0, drift);
    const double coarse = exchange_defect(1.0, 1.0, unused);
    const double fine = exchange_defect(1.0, 0.5, unused);
    const double ratio = coarse / fine;
    const bool pass = drift <= 1e-12 && mu0_defect <= 1e-12 && ratio >= 3.4 && ratio <= 4.6;
    return {pass, fmt("mu=0 mass drift/time=%.2e step defect=%.2e; mu=1 defect dt=%.3e dt/2=%.3e "
                      "ratio=%.3f (want [3.4,4.6])",
                      drift, mu0_defect, coarse, fine, ratio)};
}

Outcome criterion4()
{
    const ExactSolution exact = standard_mms_pair(1.0, 0.01);
    PhysParams p = default_params(Grid(0.0, 1.0, 32), 1.0, 0.01, 0.5);
    const ConvergenceTable space = mms_verify(exact, p, {32, 64, 128, 256});
    double space_order = INFINITY;
    for (std::size_t i = 1; i < space.rows.size(); ++i) {
        space_order = std::min(space_order, space.rows[i].observed_order);
    }
    const ConvergenceTable time = mms_temporal(exact, p, 512, {4e-3, 2e-3, 1e-3});
    double time_order = INFINITY;
    for (std::size_t i = 1; i < time.rows.size(); ++i) {
        time_order = std::min(time_order, time.rows[i].observed_order);
    }
    const bool pass = space_order >= 1.9 && time_order >= 0.9;
    return {pass, fmt("spatial order=%.3f (want >=1.9), temporal order=%.3f (want >=0.9)",
                      space_order, time_order)};
}

Outcome criterion5()
{
    if (auto e = suite_error(); !e.empty()) {
        return {false, e};
    }
    std::size_t checked = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    for (const SuiteRun& r : suite()) {
        for (const SimState& s : r.result.snapshots) {
            for (const Field* f : {&s.u, &s.v, &s.theta}) {
                const AgmonResult a = agmon_check(*f);
                ++checked;
                failures += a.holds ? 0 : 1;
                if (a.rhs > 0.0) {
                    worst = std::max(worst, a.lhs / a.rhs);
                }
            }
        }
    }
    return {failures == 0,
            fmt("%zu fields checked, %zu failures, worst lhs/rhs=%.3f", checked, failures, worst)};
}

Outcome criterion6()
{
    if (auto e = suite_error(); !e.empty()) {
        return {false, e};
    }
    std::size_t failed = 0;
    double worst_energy = 0.0;
    double worst_gronwall = 0.0;
    std::string first;
    for (const SuiteRun& r : suite()) {
        const BoundReport rep = bound_monitor(r.norms, r.init, r.params);
        for (const BoundCheck& c : rep.checks) {
            if (c.name == "energy_sup") {
                worst_energy = std::max(worst_energy, c.ratio);
            }
            if (c.name == "theta_l2_gronwall") {
                worst_gronwall = std::max(worst_gronwall, c.ratio);
            }
            if (!c.pass) {
                ++failed;
                if (first.empty()) {
                    first = fmt(" first: %s mu=%g nu=%g ratio=%.17g", c.name.c_str(), r.c.mu,
                                r.c.nu, c.ratio);
                }
            }
        }
    }
    return {failed == 0, fmt("%zu failed checks, worst energy ratio=%.15f, worst gronwall ratio=%.3e%s",
                             failed, worst_energy, worst_gronwall, first.c_str())};
}

SweepReport sweep_panel(double t_end)
{
    const auto grid = make_grid(-2.0, 2.0, 128);
    const InitialData init = standard_packet_data(grid);
    PhysParams p = default_params(*grid, 1.0, 1.0, t_end);
    std::vector<double> nus;
    for (int k = 0; k <= 6; ++k) {
        nus.push_back(std::ldexp(1.0, -k));
    }
    return viscosity_sweep(init, p, nus, true, {.output_dt = 0.01, .threads = 0, .data_tag = "packet"});
}

Outcome criterion7()
{
    const SweepReport rep = sweep_panel(0.25);
    for (const SweepBranch& b : rep.branches) {
        if (!b.ok) {
            return {false, fmt("branch nu=%g failed: %s", b.nu, b.error.c_str())};
        }
    }
    bool monotone = true;
    std::ostringstream dist;
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        dist << (i ? "," : "") << fmt("%.2e", rep.pairs[i].dist_u);
        if (i > 0 && !(rep.pairs[i].dist_u < rep.pairs[i - 1].dist_u)) {
            monotone = false;
        }
    }
    // test functions 0 and 1 are psi = 1 and psi = x
    bool cauchy = true;
    std::ostringstream diffs;
    for (std::size_t k = 0; k < 2; ++k) {
        double prev = INFINITY;
        bool decreasing = true;
        diffs << (k ? "; " : "") << "psi=" << rep.test_names[k] << " [";
        for (std::size_t i = 1; i < rep.branches.size(); ++i) {
            const double d = std::abs(rep.branches[i].pairings[k] - rep.branches[i - 1].pairings[k]);
            diffs << (i > 1 ? "," : "") << fmt("%.2e", d);
            decreasing = decreasing && d < prev;
            prev = d;
        }
        diffs << "] " << (decreasing ? "decreasing" : "NOT decreasing");
        cauchy = cauchy && decreasing;
    }
    return {monotone && cauchy, fmt("dist_u=[%s] %s; pairing diffs %s", dist.str().c_str(),
                                    monotone ? "monotone" : "NOT monotone", diffs.str().c_str())};
}

Outcome criterion8()
{
    const double sigma4 = squeeze_factor(1.0, 4);
    bool contained = true;
    const auto grid = make_grid(-1.0, 1.0, 512);
    const Field hat = Field::sample(
        grid, [](double x) { return 1.0 - std::abs(x); }, Boundary::DirichletZero);
    std::vector<double> dist;
    for (long n : {16L, 64L, 256L, 1024L}) {
        const Field m = mollify_velocity(hat, n);
        // first and last interior nodes must be exactly zero
        contained = contained && m[1] == 0.0 && m[grid->n_nodes() - 2] == 0.0;
        if (n <= 256) {
            const Field diff = m - hat;
            dist.push_back(std::sqrt(std::pow(l2_norm(diff), 2) + std::pow(l2_norm(d1(diff)), 2)));
        }
    }
    const bool decreasing = dist[1] < dist[0] && dist[2] < dist[1];
    const bool pass = sigma4 == 3.0 && contained && decreasing;
    return {pass, fmt("sigma_4=%.17g, support %s, H1 distance n=16,64,256: %.3e %.3e %.3e", sigma4,
                      contained ? "strictly interior" : "NOT contained", dist[0], dist[1], dist[2])};
}

std::string serialize(const StabilityReport& rep)
{
    std::string out;
    for (const StabilityRow& r : rep.rows) {
        for (const DifferenceRow& d : r.history) {
            out += format_number(d.t) + ',' + format_number(d.dv_l2) + ',' + format_number(d.dux_l2) +
                   ',' + format_number(d.dtheta_l2) + ',' + format_number(d.dtheta_x_cum) + '\n';
        }
    }
    return out + format_number(rep.slope);
}

Outcome criterion9()
{
    const auto grid = make_grid(0.0, 1.0, 64);
    // theta0 is lifted off zero so that the cos perturbation keeps it admissible
    InitialData init = standard_packet_data(grid);
    for (double& th : init.theta0.values()) {
        th += 0.5;
    }
    const PhysParams p = default_params(*grid, 1.0, 0.05, 0.5);
    const std::vector<double> deltas{1e-4, 2e-4, 4e-4};
    const StabilityReport a = stability_experiment(init, deltas, p, PerturbTarget::Theta0);
    const StabilityReport b = stability_experiment(init, deltas, p, PerturbTarget::Theta0, 1);
    const bool identical = serialize(a) == serialize(b);

    const RunResult r1 = run(init, p);
    const RunResult r2 = run(init, p);
    const bool runs_equal = r1.final_state.u == r2.final_state.u &&
                            r1.final_state.v == r2.final_state.v &&
                            r1.final_state.theta == r2.final_state.theta;

    const bool pass = a.slope >= 0.9 && a.slope <= 1.1 && identical && runs_equal;
    return {pass, fmt("slope=%.4f (want [0.9,1.1]), repeated experiment %s, repeated run %s", a.slope,
                      identical ? "byte-identical" : "DIFFERS", runs_equal ? "identical" : "DIFFERS")};
}

Outcome criterion10()
{
    if (auto e = suite_error(); !e.empty()) {
        return {false, e};
    }
    int max_iter = 0;
    for (const SuiteRun& r : suite()) {
        max_iter = std::max(max_iter, r.result.max_picard_iterations);
    }

    // Four times the cell size with a tight iteration budget: Picard stalls
    // and the driver has to recover by halving.
    const auto grid = make_grid(0.0, 1.0, kSuiteCells);
    PhysParams big = default_params(*grid, 2.0, 0.0, kSuiteEnd);
    big.dt = 4.0 * grid->h();
    big.picard_max = 10;
    std::string recovery;
    bool recovered = false;
    try {
        const RunResult r = run(standard_packet_data(grid), big);
        recovered = r.rejected_picard > 0 && r.final_state.t == kSuiteEnd;
        recovery = fmt("dt=4h: %zu Picard rejections, %zu positivity rejections, %zu substeps, "
                       "reached t=%g",
                       r.rejected_picard, r.rejected_positivity, r.dt_history.size(), r.final_state.t);
    } catch (const AbortedRun& e) {
        recovery = fmt("dt=4h aborted: %s", e.what());
    }
    const bool pass = max_iter <= 10 && recovered;
    return {pass, fmt("max Picard iterations over suite=%d (want <=10); %s", max_iter, recovery.c_str())};
}

}  // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                         criterion4, criterion5, criterion6,
                                                         criterion7, criterion8, criterion9,
                                                         criterion10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2zu: %s  %s  [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }

    // Informational: the same sweep panel carried to t = 1.
    try {
        const SweepReport rep = sweep_panel(1.0);
        std::printf("info: sweep to t=1 dist_u:");
        for (const SweepPair& p : rep.pairs) {
            std::printf(" %.2e", p.dist_u);
        }
        std::printf("\n");
    } catch (const std::exception& e) {
        std::printf("info: sweep to t=1 failed: %s\n", e.what());
    }

    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
