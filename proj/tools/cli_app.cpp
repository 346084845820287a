#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kecone/metric_geometry.hpp"
#include "kecone/output_formats.hpp"
#include "kecone/reference_solutions.hpp"
#include "kecone/shooting.hpp"

namespace kecone::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    double r0 = -1e-5;
    double r_end = -500.0;
    StepControl control{};
    std::string out_path;
    std::string format = "csv";
    std::string gnuplot_path;
    std::string config_path;
};

struct Options {
    CommonOptions common;
    double tau = std::nan("");
    double tau_min = std::nan("");
    double tau_max = std::nan("");
    std::size_t steps = 0;
    bool log_grid = false;
    unsigned threads = 0;
    double beta = std::nan("");
    double tol = 1e-4;
    std::string model;
    double param_min = std::nan("");
    double param_max = std::nan("");
    std::size_t samples = 100;
    std::size_t compare_samples = 1000;
    double max_error_f = kDefaultMaxErrorF;
    double max_error_R = kDefaultMaxErrorR;
    double max_error_csq = kDefaultMaxErrorCsq;
};

void add_common(CLI::App& sub, CommonOptions& c) {
    sub.add_option("--r0", c.r0, "Seed offset from the singular end (r0 < 0)");
    sub.add_option("--r-end", c.r_end, "Far-field sampling point (r_end < r0)");
    sub.add_option("--rel-tol", c.control.rel_tol, "Per-step relative tolerance");
    sub.add_option("--abs-tol", c.control.abs_tol, "Per-step absolute tolerance");
    sub.add_option("--h-min", c.control.h_min, "Smallest step in r");
    sub.add_option("--h-max", c.control.h_max, "Largest step in r");
    sub.add_option("--max-steps", c.control.max_steps, "Accepted step budget");
    sub.add_option("--out", c.out_path, "Output data file");
    sub.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--gnuplot-script", c.gnuplot_path, "Also write a gnuplot script here");
    sub.add_option("--config", c.config_path, "Flat key = value file; flags take precedence");
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Fills options that were not given on the command line from a flat
// `key = value` file. Keys are long flag names without the leading dashes.
void apply_config_file(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config") {
            throw UsageError(path + ": config files cannot include other config files");
        }
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (opt->count() > 0) {
            continue;
        }
        opt->add_result(value);
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

ShootingConfig shooting_config(const Options& o, double tau) {
    ShootingConfig config;
    config.tau = tau;
    config.r0 = o.common.r0;
    config.r_end = o.common.r_end;
    config.control = o.common.control;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return config;
}

double require_set(double value, const std::string& flag) {
    if (std::isnan(value)) {
        throw UsageError(flag + " is required");
    }
    return value;
}

void emit_table(const io::Table& table, const CommonOptions& c, std::ostream& fallback,
                const std::string& title) {
    auto write = [&](std::ostream& os) {
        if (c.format == "json") {
            io::write_json(os, table);
        } else {
            io::write_csv(os, table);
        }
    };
    if (c.out_path.empty()) {
        write(fallback);
    } else {
        std::ofstream file(c.out_path, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot open " + c.out_path + " for writing");
        }
        write(file);
    }
    if (!c.gnuplot_path.empty()) {
        if (c.format != "csv") {
            throw UsageError("--gnuplot-script needs csv format");
        }
        std::ofstream script(c.gnuplot_path, std::ios::binary);
        if (!script) {
            throw std::runtime_error("cannot open " + c.gnuplot_path + " for writing");
        }
        script << io::gnuplot_script(table, c.out_path, title);
    }
}

void print_kv(std::ostream& out, const std::string& key, double value) {
    out << key << " = " << io::format_number(value) << '\n';
}

int report_failure(std::ostream& out, std::ostream& err, TerminationStatus status) {
    out << "status = " << to_string(status) << '\n';
    err << "trajectory failed: " << to_string(status) << '\n';
    return kNumericalFailure;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    const double tau = require_set(o.tau, "--tau");
    const ShootingResult result = shoot(shooting_config(o, tau));
    if (!o.common.out_path.empty()) {
        emit_table(io::trajectory_table(result.trajectory.samples), o.common, out,
                   "trajectory tau = " + io::format_number(tau));
    }
    if (!result.succeeded()) {
        return report_failure(out, err, result.status());
    }
    print_kv(out, "alpha_sq", *result.alpha_sq);
    print_kv(out, "beta", *result.beta);
    out << "status = " << to_string(result.status()) << '\n';
    return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const double lo = require_set(o.tau_min, "--tau-min");
    const double hi = require_set(o.tau_max, "--tau-max");
    if (o.steps == 0) {
        throw UsageError("--steps must be positive; the grid is empty");
    }
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw UsageError("tau bounds must be positive");
    }
    const std::vector<double> grid =
        o.log_grid ? kecone::log_grid(lo, hi, o.steps) : linear_grid(lo, hi, o.steps);
    const ShootingConfig base = shooting_config(o, grid.front());
    const std::vector<SweepRecord> records = sweep(grid, base, o.threads);

    std::ostringstream sink;
    emit_table(io::sweep_table(records), o.common, o.common.out_path.empty() ? out : sink,
               "sweep");
    const auto failed = static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(),
        [](const SweepRecord& r) { return r.status != TerminationStatus::ReachedEnd; }));
    if (!o.common.out_path.empty()) {
        out << "records = " << records.size() << '\n' << "failed = " << failed << '\n';
    }
    if (failed > 0) {
        err << failed << " of " << records.size() << " trajectories failed\n";
        return kNumericalFailure;
    }
    return kSuccess;
}

int cmd_find_beta(const Options& o, std::ostream& out, std::ostream& err) {
    const double beta = require_set(o.beta, "--beta");
    if (!(beta > 0.25)) {
        err << "no solution: the cone-angle parameter must satisfy beta > 1/4 "
               "(equivalently alpha^2 > 0.25)\n";
        return kNumericalFailure;
    }
    if (beta > 1.5) {
        throw UsageError("--beta must not exceed 1.5");
    }
    if (!(o.tol > 0.0)) {
        throw UsageError("--tol must be positive");
    }
    const ShootingConfig base = shooting_config(o, 1.0);
    try {
        const TauSearchResult found = find_tau_for_beta(beta, base, o.tol);
        print_kv(out, "tau", found.tau);
        print_kv(out, "beta", found.beta);
        print_kv(out, "alpha_sq", alpha_sq_from_beta(found.beta));
        out << "shots = " << found.shots << '\n';
        return kSuccess;
    } catch (const NoBracketError& e) {
        err << e.what() << '\n';
    } catch (const TrajectoryFailure& e) {
        err << e.what() << '\n';
    }
    return kNumericalFailure;
}

int cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
    const double tau = require_set(o.tau, "--tau");
    const ShootingResult result = shoot(shooting_config(o, tau));
    if (!result.succeeded()) {
        return report_failure(out, err, result.status());
    }
    const MetricProfile profile = build_profile(result.trajectory.samples);
    if (!o.common.out_path.empty()) {
        emit_table(io::profile_table(profile), o.common, out,
                   "metric profile tau = " + io::format_number(tau));
    }
    print_kv(out, "t_max", profile.t_max());
    print_kv(out, "alpha_sq", *result.alpha_sq);
    return kSuccess;
}

int cmd_bubble(const Options& o, std::ostream& out, std::ostream& err) {
    const double tau = require_set(o.tau, "--tau");
    const ShootingResult result = shoot(shooting_config(o, tau));
    if (!result.succeeded()) {
        return report_failure(out, err, result.status());
    }
    const std::vector<BubbleRow> rows = bubble_rescale(result.trajectory.samples, tau);
    if (!o.common.out_path.empty()) {
        emit_table(io::bubble_table(rows), o.common, out,
                   "bubble rescaling tau = " + io::format_number(tau));
    }
    const BubbleErrors errors = bubble_sup_errors(rows);
    print_kv(out, "window_min", kBubbleWindowMin);
    print_kv(out, "sup_error_f", errors.sup_error_f);
    print_kv(out, "sup_error_h", errors.sup_error_h);
    out << "sample_count = " << errors.sample_count << '\n';
    return kSuccess;
}

ReferenceModel require_model(const std::string& name) {
    const auto model = parse_reference_model(name);
    if (!model) {
        throw UsageError("unknown model '" + name + "'; expected p2, p1xp1, p114 or eguchi-hanson");
    }
    return *model;
}

int cmd_reference(const Options& o, std::ostream& out, std::ostream&) {
    const ReferenceModel model = require_model(o.model);
    const double lo = require_set(o.param_min, "--param-min");
    const double hi = require_set(o.param_max, "--param-max");
    io::Table table;
    try {
        table = io::reference_table(model, lo, hi, o.samples);
    } catch (const std::logic_error& e) {
        throw UsageError(e.what());
    }
    emit_table(table, o.common, out, "reference " + std::string(to_string(model)));
    return kSuccess;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    const ReferenceModel model = require_model(o.model.empty() ? "p114" : o.model);
    if (model == ReferenceModel::EguchiHanson) {
        throw UsageError("compare supports p2, p1xp1 and p114; use `bubble` for eguchi-hanson");
    }
    const double tau = require_set(o.tau, "--tau");
    const ShootingResult result = shoot(shooting_config(o, tau));
    if (!result.succeeded()) {
        return report_failure(out, err, result.status());
    }
    const ComparisonReport report =
        compare_to_reference(build_profile(result.trajectory.samples), model, o.compare_samples);
    if (o.common.format == "json") {
        io::write_report_json(out, report);
    } else {
        io::write_report_text(out, report);
    }
    const bool pass = report.sup_error_f < o.max_error_f && report.sup_error_R < o.max_error_R &&
                      report.sup_error_csq < o.max_error_csq;
    if (!pass) {
        err << "comparison above threshold\n";
        return kNumericalFailure;
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conical Kähler–Einstein shooting solver on P2 with cone angle along a conic"};
    app.name("kecone");
    app.require_subcommand(1);

    Options o;
    using Command = std::function<int(const Options&, std::ostream&, std::ostream&)>;
    std::map<CLI::App*, Command> commands;

    auto* solve = app.add_subcommand("solve", "Integrate one trajectory; write r,f,h");
    solve->add_option("--tau", o.tau, "Boundary parameter tau = -1/h(0)");
    commands[solve] = cmd_solve;

    auto* sw = app.add_subcommand("sweep", "Tabulate tau -> (alpha^2, beta, t_max)");
    sw->add_option("--tau-min", o.tau_min, "First tau");
    sw->add_option("--tau-max", o.tau_max, "Last tau");
    sw->add_option("--steps", o.steps, "Number of grid points, endpoints included");
    sw->add_flag("--log", o.log_grid, "Logarithmic instead of linear spacing");
    sw->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
    commands[sw] = cmd_sweep;

    auto* fb = app.add_subcommand("find-beta", "Find tau for a target cone-angle parameter");
    fb->add_option("--beta", o.beta, "Target beta in (1/4, 1.5]");
    fb->add_option("--tol", o.tol, "Tolerance on beta");
    commands[fb] = cmd_find_beta;

    auto* prof = app.add_subcommand("profile", "Metric data (t, r, f, R, a, b, c) along a solution");
    prof->add_option("--tau", o.tau, "Boundary parameter");
    commands[prof] = cmd_profile;

    auto* bub = app.add_subcommand("bubble", "Rescaled data (f tau, h tau) against Eguchi-Hanson");
    bub->add_option("--tau", o.tau, "Boundary parameter");
    commands[bub] = cmd_bubble;

    auto* ref = app.add_subcommand("reference", "Closed-form metric data");
    ref->add_option("--model", o.model, "p2 | p1xp1 | p114 | eguchi-hanson");
    ref->add_option("--param-min", o.param_min, "First parameter value (t, or s for eguchi-hanson)");
    ref->add_option("--param-max", o.param_max, "Last parameter value");
    ref->add_option("--samples", o.samples, "Number of samples");
    commands[ref] = cmd_reference;

    auto* cmp = app.add_subcommand("compare", "Sup errors of a solution against a closed form");
    cmp->add_option("--tau", o.tau, "Boundary parameter");
    cmp->add_option("--model", o.model, "p2 | p1xp1 | p114 (default p114)");
    cmp->add_option("--samples", o.compare_samples, "Uniform comparison points");
    cmp->add_option("--max-error-f", o.max_error_f, "Pass threshold for f");
    cmp->add_option("--max-error-R", o.max_error_R, "Pass threshold for R");
    cmp->add_option("--max-error-csq", o.max_error_csq, "Pass threshold for c^2");
    commands[cmp] = cmd_compare;

    for (auto& [sub, _] : commands) {
        add_common(*sub, o.common);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsageError;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (!o.common.config_path.empty()) {
            apply_config_file(*active, o.common.config_path);
        }
        if (!o.common.gnuplot_path.empty() && o.common.out_path.empty()) {
            throw UsageError("--gnuplot-script needs --out");
        }
        return commands.at(active)(o, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n' << active->help();
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace kecone::cli
