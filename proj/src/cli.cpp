#include "thermo1d/cli.hpp"

#include "thermo1d/config.hpp"
#include "thermo1d/csv.hpp"
#include "thermo1d/diagnostics.hpp"
#include "thermo1d/errors.hpp"
#include "thermo1d/experiments.hpp"
#include "thermo1d/operators.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace thermo1d {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_number_list(const std::string& name, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw ConstraintViolation(name, text, "comma-separated numbers");
        }
        item = item.substr(first, last - first + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw ConstraintViolation(name, text, "comma-separated numbers");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConstraintViolation(name, text, "at least one number");
    }
    return out;
}

/// Stores every `every`-th accepted state for field dumps.
class FieldRecorder : public Observer {
public:
    explicit FieldRecorder(std::size_t every) : every_(every) {}

    void begin(const SimState& initial, const PhysParams&) override
    {
        states_.clear();
        states_.emplace_back(0, initial);
    }

    void on_step(const StepRecord& record) override
    {
        last_ = record.step;
        if (record.step % every_ == 0) {
            states_.emplace_back(record.step, record.next);
        } else {
            pending_ = record.next;
        }
    }

    /// Adds the final state if the stride skipped it.
    std::vector<std::pair<std::size_t, SimState>> finish()
    {
        if (pending_ && states_.back().first != last_) {
            states_.emplace_back(last_, *pending_);
        }
        return std::move(states_);
    }

private:
    std::size_t every_;
    std::size_t last_ = 0;
    std::optional<SimState> pending_;
    std::vector<std::pair<std::size_t, SimState>> states_;
};

struct Context {
    RunConfig config;
    fs::path base_dir;
    fs::path out_dir;
    GridPtr grid;
    PhysParams params;
};

Context load(const std::string& config_path, const std::string& out_dir)
{
    Context ctx;
    ctx.config = load_config(config_path);
    ctx.base_dir = fs::path(config_path).parent_path();
    ctx.out_dir = out_dir.empty() ? fs::path(ctx.config.output.dir) : fs::path(out_dir);
    ctx.grid = ctx.config.make_grid();
    ctx.params = ctx.config.params(*ctx.grid);
    return ctx;
}

void summary(std::ostream& out, const std::string& label, double t, double min_theta,
             double max_residual, std::size_t picard)
{
    out << label << ": t=" << format_number(t) << " min_theta=" << format_number(min_theta)
        << " max_abs_residual=" << format_number(max_residual) << " picard_iterations=" << picard
        << '\n';
}

int cmd_run(const Context& ctx, std::ostream& out)
{
    const InitialData init = ctx.config.initial_data(ctx.grid, ctx.base_dir);
    const auto every = static_cast<std::size_t>(ctx.config.output.every);
    EnergyLedger ledger;
    NormHistory history;
    FieldRecorder fields(every);
    std::vector<Observer*> observers{&ledger, &history};
    if (ctx.config.output.emit_fields) {
        observers.push_back(&fields);
    }
    const RunResult result = run(init, ctx.params, {}, observers, RunOptions{0, 10});

    const auto keep = [&](std::size_t index, std::size_t count) {
        return index % every == 0 || index + 1 == count;
    };

    CsvWriter energy(ctx.out_dir / "energy.csv",
                     "step,t,kinetic,elastic,thermal_l1,dissipation_cum,residual");
    const auto& rows = ledger.rows();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!keep(k, rows.size())) {
            continue;
        }
        const EnergyRow& r = rows[k];
        energy.row({static_cast<double>(r.step), r.t, r.kinetic, r.elastic, r.thermal_l1,
                    r.dissipation_cum, r.residual});
    }

    CsvWriter norm_csv(ctx.out_dir / "norms.csv",
                       "step,t,u_l2,u_linf,u_x_l2,v_l2,v_linf,v_x_l2,theta_l1,theta_l2,"
                       "theta_linf,theta_x_l2,theta_t_l2,u_tt_l2,theta_tx_l2");
    const auto& nrows = history.rows();
    for (std::size_t k = 0; k < nrows.size(); ++k) {
        if (!keep(k, nrows.size())) {
            continue;
        }
        const NormRow& r = nrows[k];
        norm_csv.row({static_cast<double>(r.step), r.t, r.u.l2, r.u.linf, r.u.h1_semi, r.v.l2,
                      r.v.linf, r.v.h1_semi, r.theta.l1, r.theta.l2, r.theta.linf,
                      r.theta.h1_semi, r.theta_t_l2, r.u_tt_l2, r.theta_tx_l2});
    }

    std::vector<std::unique_ptr<CsvWriter>> field_files;
    if (ctx.config.output.emit_fields) {
        for (const auto& [step, state] : fields.finish()) {
            auto w = std::make_unique<CsvWriter>(
                ctx.out_dir / ("fields_" + std::to_string(step) + ".csv"), "x,u,v,theta");
            const Grid& g = state.u.grid();
            for (std::size_t i = 0; i < g.n_nodes(); ++i) {
                w->row({g.x(i), state.u[i], state.v[i], state.theta[i]});
            }
            field_files.push_back(std::move(w));
        }
    }
    energy.commit();
    norm_csv.commit();
    for (auto& w : field_files) {
        w->commit();
    }
    summary(out, "run", result.final_state.t, result.min_theta, ledger.max_abs_residual(),
            result.total_picard_iterations);
    return 0;
}

int cmd_sweep(const Context& ctx, std::ostream& out, const std::string& nu_text, bool mollify_data,
              double output_dt)
{
    const std::vector<double> nu_list = parse_number_list("nu-list", nu_text);
    RunConfig raw = ctx.config;
    if (mollify_data) {
        raw.data.mollify_n.reset();
    }
    const InitialData init = raw.initial_data(ctx.grid, ctx.base_dir);
    SweepOptions options;
    options.output_dt = output_dt;
    options.data_tag = ctx.config.data.u0_kind + "|" + ctx.config.data.u1_kind + "|" +
                       ctx.config.data.theta0_kind;
    const SweepReport report = viscosity_sweep(init, ctx.params, nu_list, mollify_data, options);

    CsvWriter pairs(ctx.out_dir / "sweep.csv", "nu_hi,nu_lo,dist_u,dist_v,dist_theta");
    for (const SweepPair& p : report.pairs) {
        pairs.row({p.nu_hi, p.nu_lo, p.dist_u, p.dist_v, p.dist_theta});
    }
    std::string header = "nu,n,ok,final_t,min_theta,max_abs_residual,picard_iterations,nu_h2_proxy";
    for (const auto& name : report.test_names) {
        header += ",pairing_" + name;
    }
    CsvWriter branches(ctx.out_dir / "sweep_branches.csv", header);
    bool all_ok = true;
    for (const SweepBranch& b : report.branches) {
        std::vector<std::string> cells{format_number(b.nu), std::to_string(b.n), b.ok ? "1" : "0",
                                       format_number(b.final_t), format_number(b.min_theta),
                                       format_number(b.max_abs_residual),
                                       std::to_string(b.picard_iterations),
                                       format_number(b.nu_h2_proxy)};
        for (std::size_t j = 0; j < report.test_names.size(); ++j) {
            cells.push_back(b.ok ? format_number(b.pairings[j]) : "nan");
        }
        branches.row(cells);
        if (b.ok) {
            summary(out, "sweep nu=" + format_number(b.nu), b.final_t, b.min_theta,
                    b.max_abs_residual, b.picard_iterations);
        } else {
            out << "sweep nu=" << format_number(b.nu) << ": failed: " << b.error << '\n';
            all_ok = false;
        }
    }
    pairs.commit();
    branches.commit();
    return all_ok ? 0 : 2;
}

int cmd_mms(const Context& ctx, std::ostream& out, const std::string& n_text, double dt_factor,
            int temporal_n, const std::string& dt_text)
{
    std::vector<int> n_list;
    for (double v : parse_number_list("n-list", n_text)) {
        if (v != std::floor(v) || v < 2) {
            throw ConstraintViolation("n-list", n_text, "integers >= 2");
        }
        n_list.push_back(static_cast<int>(v));
    }
    const std::vector<double> dt_list = parse_number_list("dt-list", dt_text);
    const ExactSolution exact = standard_mms_pair(ctx.params.mu, ctx.params.nu);
    PhysParams params = ctx.params;
    params.dt = std::min(params.dt, params.t_end);
    const ConvergenceTable space = mms_verify(exact, params, n_list, dt_factor);
    const ConvergenceTable time = mms_temporal(exact, params, temporal_n, dt_list);

    auto write = [&](const fs::path& path, const ConvergenceTable& table, const char* label) {
        CsvWriter w(path, "n_cells,dt,error_u_l2,error_theta_l2,observed_order");
        for (const ConvergenceRow& r : table.rows) {
            w.row({static_cast<double>(r.n_cells), r.dt, r.error_u_l2, r.error_theta_l2,
                   r.observed_order});
            out << "mms " << label << " n_cells=" << r.n_cells << " dt=" << format_number(r.dt)
                << " error_u=" << format_number(r.error_u_l2)
                << " error_theta=" << format_number(r.error_theta_l2)
                << " order=" << format_number(r.observed_order) << '\n';
        }
        w.commit();
    };
    write(ctx.out_dir / "mms_space.csv", space, "space");
    write(ctx.out_dir / "mms_time.csv", time, "time");
    return 0;
}

int cmd_stability(const Context& ctx, std::ostream& out, const std::string& delta_text,
                  const std::string& target_name)
{
    const std::vector<double> deltas = parse_number_list("deltas", delta_text);
    const PerturbTarget target = target_name == "u1" ? PerturbTarget::U1 : PerturbTarget::Theta0;
    const InitialData init = ctx.config.initial_data(ctx.grid, ctx.base_dir);
    const StabilityReport report = stability_experiment(init, deltas, ctx.params, target);

    CsvWriter w(ctx.out_dir / "stability.csv",
                "delta,final_dv,final_dux,final_dtheta,final_dtheta_x_cum,final_difference,k_ratio,"
                "max_growth_jump");
    for (const StabilityRow& r : report.rows) {
        w.row({r.delta, r.final_dv, r.final_dux, r.final_dtheta, r.final_dtheta_x_cum,
               r.final_difference, r.k_ratio, r.max_growth_jump});
        summary(out, "stability delta=" + format_number(r.delta), r.final_t, r.min_theta,
                r.max_abs_residual, r.picard_iterations);
    }
    w.commit();
    out << "stability slope=" << format_number(report.slope) << '\n';
    return 0;
}

int cmd_check_data(const Context& ctx, std::ostream& out)
{
    RunConfig raw = ctx.config;
    raw.data.mollify_n.reset();
    const InitialData init = raw.initial_data(ctx.grid, ctx.base_dir);
    std::optional<MollifiedFamily> fam;
    if (ctx.config.data.mollify_n) {
        fam = mollify(init, *ctx.config.data.mollify_n);
        out << "mollify n=" << fam->n << " sigma_n=" << format_number(fam->sigma_n)
            << " eps_n=" << format_number(fam->eps_n) << '\n';
    }

    std::string header = "x,u0,u1,theta0";
    if (fam) {
        header += ",u1_n,theta0_n";
    }
    CsvWriter w(ctx.out_dir / "initial_data.csv", header);
    const Grid& g = *ctx.grid;
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        std::vector<std::string> cells{format_number(g.x(i)), format_number(init.u0[i]),
                                       format_number(init.u1[i]), format_number(init.theta0[i])};
        if (fam) {
            cells.push_back(format_number(fam->u1_n[i]));
            cells.push_back(format_number(fam->theta0_n[i]));
        }
        w.row(cells);
    }
    w.commit();

    auto report = [&](const char* name, const Field& f) {
        const AgmonResult a = agmon_check(f);
        out << "agmon " << name << ": lhs=" << format_number(a.lhs) << " rhs=" << format_number(a.rhs)
            << (a.holds ? " holds" : " FAILS") << '\n';
        return a.holds;
    };
    bool ok = report("u0", init.u0) && report("u1", init.u1) && report("theta0", init.theta0);
    if (fam) {
        ok = report("u1_n", fam->u1_n) && report("theta0_n", fam->theta0_n) && ok;
    }
    out << "check-data: " << (ok ? "ok" : "agmon failure") << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"thermo1d: 1D thermoelasticity with artificial viscosity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Sectioned key = value configuration file")
            ->required();
        sub->add_option("--out", out_dir, "Output directory (defaults to output.dir)");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Single run with energy and norm logs");
    common(run_cmd);

    std::string nu_text;
    bool mollify_data = false;
    double output_dt = 0.01;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Vanishing-viscosity sweep");
    common(sweep_cmd);
    sweep_cmd->add_option("--nu-list", nu_text, "Strictly decreasing viscosities, e.g. 1,0.5,0.25")
        ->required();
    sweep_cmd->add_flag("--mollify", mollify_data, "Regularize data at n = 1/nu per branch");
    sweep_cmd->add_option("--output-dt", output_dt, "Shared output interval");

    std::string n_text = "32,64,128,256";
    double dt_factor = 1.0;
    int temporal_n = 512;
    std::string dt_text = "4e-3,2e-3,1e-3";
    CLI::App* mms_cmd = app.add_subcommand("mms", "Manufactured-solution convergence study");
    common(mms_cmd);
    mms_cmd->add_option("--n-list", n_text, "Doubling cell counts for the spatial study");
    mms_cmd->add_option("--dt-factor", dt_factor, "Spatial study uses dt = factor * h^2");
    mms_cmd->add_option("--temporal-n", temporal_n, "Cells for the temporal study");
    mms_cmd->add_option("--dt-list", dt_text, "Halving time steps for the temporal study");

    std::string delta_text = "1e-4,2e-4,4e-4";
    std::string target = "theta0";
    CLI::App* stab_cmd = app.add_subcommand("stability", "Perturbation-response experiment");
    common(stab_cmd);
    stab_cmd->add_option("--deltas", delta_text, "Perturbation sizes");
    stab_cmd->add_option("--target", target, "Perturbed datum")
        ->check(CLI::IsMember({"theta0", "u1"}));

    CLI::App* check_cmd = app.add_subcommand("check-data", "Validate and dump initial data");
    common(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const Context ctx = load(config_path, out_dir);
        if (run_cmd->parsed()) {
            return cmd_run(ctx, out);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(ctx, out, nu_text, mollify_data, output_dt);
        }
        if (mms_cmd->parsed()) {
            return cmd_mms(ctx, out, n_text, dt_factor, temporal_n, dt_text);
        }
        if (stab_cmd->parsed()) {
            return cmd_stability(ctx, out, delta_text, target);
        }
        return cmd_check_data(ctx, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const AbortedRun& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace thermo1d
