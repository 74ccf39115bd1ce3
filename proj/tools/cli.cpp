#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "relaylab/errors.hpp"
#include "relaylab/experiment.hpp"

namespace relaylab::cli {

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<std::string> methods;
    std::optional<std::string> strategy;
    std::optional<double> db_start, db_stop, db_step;
    std::optional<std::uint64_t> trials, seed;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* opt = cmd->add_option("--config", f.config_path, "experiment config file (key=value)");
    if (config_required) opt->required();
    cmd->add_option("--out", f.out_path, "write output to this file instead of stdout");
    cmd->add_option("--methods", f.methods, "comma list: exact,asymptotic,mc,quadrature");
    cmd->add_option("--strategy", f.strategy, "ssrs or tsrs");
    cmd->add_option("--db-start", f.db_start, "sweep start, P_T/sigma^2 in dB");
    cmd->add_option("--db-stop", f.db_stop, "sweep stop, dB");
    cmd->add_option("--db-step", f.db_step, "sweep step, dB");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--workers", f.workers, "Monte Carlo worker threads (0 = auto)");
}

ExperimentConfig resolve(const CommonFlags& f) {
    ExperimentConfig exp = load_config(f.config_path);
    if (f.methods) exp.run.methods = parse_methods(*f.methods);
    if (f.strategy) exp.run.strategy = parse_strategy(*f.strategy);
    if (f.db_start) exp.run.db_start = *f.db_start;
    if (f.db_stop) exp.run.db_stop = *f.db_stop;
    if (f.db_step) exp.run.db_step = *f.db_step;
    if (f.trials) exp.run.trials = *f.trials;
    if (f.seed) exp.run.seed = *f.seed;
    if (f.workers) exp.run.workers = *f.workers;
    return exp;
}

// Streams to a file when --out is given, otherwise to `fallback`.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

int cmd_curve(const CommonFlags& flags, std::ostream& out) {
    const ExperimentConfig exp = resolve(flags);
    const std::vector<CurveRow> rows = run_curve(exp);
    OutputTarget target(flags.out_path, out);
    write_curve_csv(target.stream(), exp.run.methods, rows);
    return kExitOk;
}

int cmd_placement(const CommonFlags& flags, const std::string& grid_csv, bool origin_only,
                  std::ostream& out) {
    const ExperimentConfig exp = resolve(flags);
    if (origin_only) {
        placement::PlacementGrid grid;
        grid.radial_steps = 1;
        grid.angular_steps = 1;
        const placement::PlacementResult r = placement::optimize(exp.system, grid);
        OutputTarget target(flags.out_path, out);
        write_placement_summary(target.stream(), r.best);
        return kExitOk;
    }
    const placement::PlacementResult r = placement::optimize(exp.system);
    OutputTarget target(flags.out_path, out);
    write_placement_summary(target.stream(), r.best);
    if (!grid_csv.empty()) {
        std::ofstream grid_out(grid_csv, std::ios::binary);
        if (!grid_out) throw ConfigError("cannot open grid CSV '" + grid_csv + "'");
        write_grid_csv(grid_out, r);
    }
    return kExitOk;
}

int cmd_validate(const CommonFlags& flags, const std::string& suite, std::ostream& out) {
    std::vector<Gate> gates;
    if (!flags.config_path.empty())
        gates = validate_config(resolve(flags));
    else
        gates = validate_builtin(suite);
    OutputTarget target(flags.out_path, out);
    write_gate_report(target.stream(), gates);
    return all_pass(gates) ? kExitOk : kExitGateFailure;
}

int cmd_mc(const CommonFlags& flags, std::ostream& out) {
    const ExperimentConfig exp = resolve(flags);
    sim::McSettings mc{exp.run.trials, exp.run.seed, 1u << 16, exp.run.workers};
    const OutageEstimate e = sim::estimate_op(exp.system, exp.run.strategy, mc);
    OutputTarget target(flags.out_path, out);
    target.stream() << "op=" << format_double(e.value)
                    << " half_width=" << format_double(*e.half_width) << " trials=" << exp.run.trials
                    << " seed=" << exp.run.seed << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Outage-probability laboratory for two-user NOMA relay networks"};
    app.require_subcommand(1);

    CommonFlags curve_flags;
    auto* curve = app.add_subcommand("curve", "sweep P_T/sigma^2 and emit a CSV of outage columns");
    add_common(curve, curve_flags, true);

    CommonFlags placement_flags;
    std::string grid_csv;
    bool origin_only = false;
    auto* place = app.add_subcommand("placement", "grid-search the relay position minimizing outage");
    add_common(place, placement_flags, true);
    place->add_option("--grid-csv", grid_csv, "also write the full evaluation grid to this CSV");
    place->add_flag("--origin-only", origin_only, "evaluate the origin instead of searching");

    CommonFlags validate_flags;
    std::string suite = "all";
    auto* validate = app.add_subcommand("validate", "run reconciliation gates and report pass/fail");
    add_common(validate, validate_flags, false);
    validate->add_option("--suite", suite, "builtin suite: rayleigh, degenerate, reduction, all");

    CommonFlags mc_flags;
    auto* mc = app.add_subcommand("mc", "single Monte Carlo estimate at the config operating point");
    add_common(mc, mc_flags, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfigError;
    }

    try {
        if (curve->parsed()) return cmd_curve(curve_flags, out);
        if (place->parsed()) return cmd_placement(placement_flags, grid_csv, origin_only, out);
        if (validate->parsed()) return cmd_validate(validate_flags, suite, out);
        if (mc->parsed()) return cmd_mc(mc_flags, out);
        err << "error: no subcommand given\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumericError;
    }
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace relaylab::cli
