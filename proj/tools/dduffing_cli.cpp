// dduffing command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dduffing/dduffing.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_domain = 2, exit_numerical = 3 };

struct Failure : std::runtime_error {
    Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

int exit_code(dd_status s) {
    switch (s) {
    case DD_OK: return exit_ok;
    case DD_ERR_INVALID_ARGUMENT: return exit_usage;
    case DD_ERR_DOMAIN:
    case DD_ERR_NO_SOLUTION: return exit_domain;
    default: return exit_numerical;
    }
}

void check(dd_status s) {
    if (s != DD_OK)
        throw Failure(exit_code(s), std::string(dd_status_string(s)) + ": " + dd_last_error());
}

struct OrbitDeleter {
    void operator()(dd_orbit* o) const { dd_orbit_free(o); }
};
struct TrajectoryDeleter {
    void operator()(dd_trajectory* t) const { dd_trajectory_free(t); }
};
using Orbit = std::unique_ptr<dd_orbit, OrbitDeleter>;
using Trajectory = std::unique_ptr<dd_trajectory, TrajectoryDeleter>;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

dd_parity parse_parity(const std::string& s) {
    if (s == "even")
        return DD_PARITY_EVEN;
    if (s == "odd")
        return DD_PARITY_ODD;
    throw Failure(exit_usage, "parity must be 'even' or 'odd'");
}

const char* parity_name(dd_parity p) { return p == DD_PARITY_EVEN ? "even" : "odd"; }

// Relative output paths land in $DDUFFING_OUT_DIR when it is set.
fs::path resolve_out(const std::string& out) {
    if (out.empty())
        return {};
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("DDUFFING_OUT_DIR"); dir && *dir)
            p = fs::path(dir) / p;
    }
    return p;
}

fs::path manifest_path(const fs::path& out) {
    fs::path m = out;
    m.replace_extension(".manifest.json");
    return m;
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
}

void write_file(const fs::path& path, const std::string& text) {
    ensure_parent(path);
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f)
        throw Failure(exit_numerical, "cannot write " + path.string());
}

void write_manifest(const std::string& command, const json& params, const fs::path& out) {
    json m;
    m["command"] = command;
    m["version"] = dd_version();
    m["parameters"] = params;
    m["outputs"] = {{"data", out.string()}};
    write_file(manifest_path(out), m.dump(2) + "\n");
}

// Prints to stdout, or writes the file plus its manifest.
void emit(const std::string& command, const json& params, const std::string& text, const fs::path& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    write_file(out, text);
    write_manifest(command, params, out);
}

void check_format(const std::string& f) {
    if (f != "csv" && f != "json")
        throw Failure(exit_usage, "format must be 'csv' or 'json'");
}

// --- commands ----------------------------------------------------------------
// Each command reads its fully resolved parameters from JSON so that replay
// goes through exactly the same code path.

int run_amplitudes(const json& p, const fs::path& out) {
    const double delay = p.at("delay");
    const int n_max = p.at("n_max");
    const std::string format = p.at("format");
    check_format(format);
    if (!(delay > 0) || n_max < 1)
        throw Failure(exit_usage, "amplitudes needs delay > 0 and n_max >= 1");

    json rows = json::array();
    bool failed = false;
    std::ostringstream csv;
    csv << "n,parity,A,m,omega,p,H,status\n";
    for (int n = 1; n <= n_max; ++n) {
        const dd_parity parity = dd_parity_of(n);
        dd_orbit* raw = nullptr;
        const dd_status s = dd_orbit_solve(delay, n, &raw);
        Orbit orbit(raw);
        json row;
        row["n"] = n;
        row["parity"] = parity_name(parity);
        if (s == DD_OK) {
            dd_orbit_info info;
            check(dd_orbit_get_info(orbit.get(), &info));
            row["A"] = info.amplitude;
            row["m"] = info.modulus;
            row["omega"] = info.omega;
            row["p"] = info.period;
            row["H"] = info.energy;
            row["status"] = info.boundary_warning ? "near boundary" : "ok";
            csv << n << ',' << parity_name(parity) << ',' << num(info.amplitude) << ',' << num(info.modulus)
                << ',' << num(info.omega) << ',' << num(info.period) << ',' << num(info.energy) << ','
                << row["status"].get<std::string>() << '\n';
        } else if (s == DD_ERR_NO_SOLUTION) {
            row["status"] = "no solution";
            csv << n << ',' << parity_name(parity) << ",,,,,,no solution\n";
        } else if (s == DD_ERR_NUMERICAL) {
            // e.g. odd n with 2T/n too long to resolve; keep the rest of the table
            std::cerr << "dduffing: n = " << n << ": " << dd_last_error() << '\n';
            row["status"] = "numerical failure";
            csv << n << ',' << parity_name(parity) << ",,,,,,numerical failure\n";
            failed = true;
        } else {
            check(s);
        }
        rows.push_back(row);
    }
    emit("amplitudes", p, format == "csv" ? csv.str() : rows.dump(2) + "\n", out);
    return failed ? exit_numerical : exit_ok;
}

int run_series(const json& p, const fs::path& out) {
    const dd_parity parity = parse_parity(p.at("parity"));
    const std::string format = p.at("format");
    check_format(format);
    const int order = p.at("order");
    const bool by_amplitude = !p.at("amplitude").is_null();

    json rows = json::array();
    std::ostringstream csv;
    if (by_amplitude) {
        const double a = p.at("amplitude");
        double exact = 0;
        check(dd_minimal_period(a, parity, &exact));
        csv << "order,p_series,p_exact,rel_error\n";
        for (int k = 1; k <= order; k += 2) {
            double v = 0;
            check(dd_series_period(a, parity, k, &v));
            const double rel = std::abs(v - exact) / exact;
            csv << k << ',' << num(v) << ',' << num(exact) << ',' << num(rel) << '\n';
            rows.push_back({{"order", k}, {"p_series", v}, {"p_exact", exact}, {"rel_error", rel}});
        }
    } else {
        const double period = p.at("period");
        // The exact inverse is the lifted amplitude with 2T/n = p.
        const int n = parity == DD_PARITY_EVEN ? 2 : 1;
        dd_orbit* raw = nullptr;
        const dd_status s = dd_orbit_solve(period * n / 2.0, n, &raw);
        Orbit orbit(raw);
        std::optional<double> exact;
        if (s == DD_OK) {
            dd_orbit_info info;
            check(dd_orbit_get_info(orbit.get(), &info));
            exact = info.amplitude;
        } else if (s != DD_ERR_NO_SOLUTION) {
            check(s);
        }
        csv << "order,A_series,A_exact,rel_error\n";
        for (int k = -1; k <= order; k += 2) {
            double v = 0;
            check(dd_series_amplitude(period, parity, k, &v));
            json row{{"order", k}, {"A_series", v}, {"A_exact", nullptr}, {"rel_error", nullptr}};
            csv << k << ',' << num(v) << ',';
            if (exact) {
                const double rel = std::abs(v - *exact) / *exact;
                row["A_exact"] = *exact;
                row["rel_error"] = rel;
                csv << num(*exact) << ',' << num(rel);
            } else {
                csv << ',';
            }
            csv << '\n';
            rows.push_back(row);
        }
    }
    emit("series", p, format == "csv" ? csv.str() : rows.dump(2) + "\n", out);
    return exit_ok;
}

int run_simulate(const json& p, const fs::path& out) {
    dd_history history{};
    history.kind = DD_HISTORY_ELLIPTIC_CN;
    history.amplitude = p.at("amplitude");
    history.parity = parse_parity(p.at("parity"));

    dd_solver_config config;
    dd_solver_config_default(&config);
    config.t_end = p.at("t_end");
    config.max_step = p.at("max_step");
    config.abs_tol = p.at("abs_tol");
    config.rel_tol = p.at("rel_tol");
    const std::size_t stride = p.at("stride");

    dd_trajectory* raw = nullptr;
    const dd_status s = dd_integrate(p.at("delay"), &history, &config, &raw);
    Trajectory traj(raw);
    const std::string message = s == DD_OK ? "" : dd_last_error();
    if (s != DD_OK && !traj)
        check(s);

    ensure_parent(out);
    check(dd_trajectory_write_csv(traj.get(), out.string().c_str(), stride));
    write_manifest("simulate", p, out);
    if (s != DD_OK) {
        std::cerr << "dduffing: " << dd_status_string(s) << ": " << message << " (partial output written to "
                  << out.string() << ")\n";
        return exit_code(s);
    }
    std::cerr << "wrote " << dd_trajectory_step_count(traj.get()) << " steps to " << out.string() << '\n';
    return exit_ok;
}

int run_verify_lift(const json& p, const fs::path& out) {
    const double delay = p.at("delay");
    const int n = p.at("n");
    const int samples = p.at("samples");
    const std::string format = p.at("format");
    check_format(format);

    dd_orbit* raw = nullptr;
    check(dd_orbit_solve(delay, n, &raw));
    Orbit orbit(raw);
    dd_orbit_info info;
    check(dd_orbit_get_info(orbit.get(), &info));
    double dde = 0, shift = 0;
    check(dd_orbit_lift_residual(orbit.get(), samples, &dde, &shift));
    const bool pass = dde < 1e-8 && shift < 1e-8;

    std::string text;
    if (format == "csv") {
        text = "T,n,A,dde_residual,shift_residual,pass\n" + num(delay) + ',' + std::to_string(n) + ',' +
               num(info.amplitude) + ',' + num(dde) + ',' + num(shift) + ',' + (pass ? "true" : "false") + '\n';
    } else {
        json r{{"T", delay},          {"n", n},
               {"A", info.amplitude}, {"dde_residual", dde},
               {"shift_residual", shift}, {"pass", pass}};
        text = r.dump(2) + "\n";
    }
    emit("verify-lift", p, text, out);
    return pass ? exit_ok : exit_numerical;
}

dd_probe_options probe_options(const json& p, bool floquet) {
    dd_probe_options o;
    if (floquet)
        dd_floquet_options_default(&o);
    else
        dd_probe_options_default(&o);
    o.max_step = p.at("max_step");
    o.abs_tol = p.at("abs_tol");
    o.rel_tol = p.at("rel_tol");
    return o;
}

json verdict_json(double delay, double initial_amplitude, const dd_verdict& v) {
    const dd_probe_record record{delay, v.target_n, initial_amplitude, v.outcome, v.final_amplitude, 0.0, 0.0};
    char* s = dd_probe_record_json(&record);
    if (!s)
        check(DD_ERR_INTERNAL);
    json j = json::parse(s);
    dd_string_free(s);
    j.erase("eta");
    j.erase("fit_residual");
    j["target_n"] = v.target_n;
    j["target_amplitude"] = v.target_amplitude;
    j["initial_distance"] = v.initial_distance;
    j["final_distance"] = v.final_distance;
    j["peak_distance"] = v.peak_distance;
    j["escape_time"] = v.escape_time < 0 ? json(nullptr) : json(v.escape_time);
    j["blew_up"] = static_cast<bool>(v.blew_up);
    return j;
}

int run_probe(const json& p, const fs::path& out) {
    const double delay = p.at("delay");
    const int n = p.at("n");
    const double t_end = p.at("t_end");
    const dd_probe_options o = probe_options(p, false);

    json result;
    bool blew_up = false;
    if (!p.at("near_n").is_null()) {
        double a0 = 0;
        dd_verdict departure, arrival;
        check(dd_heteroclinic_probe(delay, p.at("near_n"), p.at("offset"), n, t_end, &o, &a0, &departure,
                                    &arrival));
        result["initial_A"] = a0;
        result["departure"] = verdict_json(delay, a0, departure);
        result["arrival"] = verdict_json(delay, a0, arrival);
        blew_up = departure.blew_up || arrival.blew_up;
    } else {
        const double a0 = p.at("amplitude");
        dd_verdict v;
        check(dd_convergence_probe(delay, a0, n, t_end, &o, &v));
        result = verdict_json(delay, a0, v);
        blew_up = v.blew_up;
    }
    emit("probe", p, result.dump(2) + "\n", out);
    return blew_up ? exit_numerical : exit_ok;
}

int run_floquet(const json& p, const fs::path& out) {
    const double delay = p.at("delay");
    const int n = p.at("n");
    const dd_probe_options o = probe_options(p, true);

    dd_floquet f;
    check(dd_floquet_estimate(delay, n, p.at("perturbation"), p.at("t_end"), &o, &f));
    dd_orbit* raw = nullptr;
    check(dd_orbit_solve(delay, n, &raw));
    Orbit orbit(raw);
    dd_orbit_info info;
    check(dd_orbit_get_info(orbit.get(), &info));

    const double a0 = info.amplitude * (1.0 + p.at("perturbation").get<double>());
    const dd_probe_record record{delay, n, a0, DD_UNDECIDED, 0.0, f.eta, f.fit_residual};
    char* s = dd_probe_record_json(&record);
    if (!s)
        check(DD_ERR_INTERNAL);
    json j = json::parse(s);
    dd_string_free(s);
    j.erase("outcome");
    j.erase("final_amplitude");
    j["A_n"] = info.amplitude;
    j["log_multiplier"] = f.log_multiplier;
    j["predicted_sign"] = f.predicted_sign;
    j["decided"] = static_cast<bool>(f.decided);
    j["fit_start"] = f.fit_start;
    j["fit_end"] = f.fit_end;
    j["fit_points"] = f.fit_points;
    j["log_multiplier_asymptotic"] = 2.0 / 3.0 * delay * delay;
    emit("floquet", p, j.dump(2) + "\n", out);
    return exit_ok;
}

int dispatch(const std::string& command, const json& p, const fs::path& out) {
    if (command == "amplitudes")
        return run_amplitudes(p, out);
    if (command == "series")
        return run_series(p, out);
    if (command == "simulate")
        return run_simulate(p, out);
    if (command == "verify-lift")
        return run_verify_lift(p, out);
    if (command == "probe")
        return run_probe(p, out);
    if (command == "floquet")
        return run_floquet(p, out);
    throw Failure(exit_usage, "unknown command in manifest: " + command);
}

int run_replay(const std::string& manifest, const std::string& out_dir) {
    std::ifstream f(manifest);
    if (!f)
        throw Failure(exit_usage, "cannot read manifest " + manifest);
    json m;
    try {
        m = json::parse(f);
    } catch (const json::exception& e) {
        throw Failure(exit_usage, std::string("malformed manifest: ") + e.what());
    }
    fs::path out = m.at("outputs").at("data").get<std::string>();
    if (!out_dir.empty())
        out = fs::path(out_dir) / out.filename();
    return dispatch(m.at("command"), m.at("parameters"), out);
}

// Resolves the orbit amplitude when only n is given.
double amplitude_of(double delay, int n) {
    dd_orbit* raw = nullptr;
    check(dd_orbit_solve(delay, n, &raw));
    Orbit orbit(raw);
    dd_orbit_info info;
    check(dd_orbit_get_info(orbit.get(), &info));
    return info.amplitude;
}

struct Options {
    double delay = 0;
    int n = 0;
    int n_max = 0;
    std::optional<int> opt_n;
    std::optional<int> near_n;
    std::optional<double> amplitude;
    std::optional<double> period;
    std::string parity;
    double offset = 0;
    double t_end = 0;
    double max_step = 1e-4;
    double abs_tol = 0;
    double rel_tol = 0;
    double perturbation = 1e-6;
    std::size_t stride = 1;
    int order = 0;
    int samples = 1000;
    std::string format;
    std::string out;
};

json nullable(const auto& v) { return v ? json(*v) : json(nullptr); }

void add_out(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "Output file (relative paths resolve against $DDUFFING_OUT_DIR)");
}

void add_format(CLI::App* sub, Options& o, const char* initial) {
    o.format = initial;
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_solver(CLI::App* sub, Options& o, double tol) {
    o.abs_tol = o.rel_tol = tol;
    sub->add_option("--max-step", o.max_step, "Maximum step size")->check(CLI::PositiveNumber);
    sub->add_option("--abs-tol", o.abs_tol, "Absolute local error tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", o.rel_tol, "Relative local error tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lifted periodic orbits of the delayed Duffing equation x''(t) + x(t-T) + x(t)^3 = 0"};
    app.set_version_flag("--version", std::string(dd_version()));
    app.require_subcommand(1);

    std::function<int()> action;

    Options amps_o;
    auto* amps = app.add_subcommand("amplitudes", "Table of lifted orbit amplitudes A_n, n = 1..n_max");
    amps->add_option("--delay", amps_o.delay, "Delay T")->required()->check(CLI::PositiveNumber);
    amps->add_option("--n-max", amps_o.n_max, "Largest n")->required()->check(CLI::PositiveNumber);
    add_format(amps, amps_o, "csv");
    add_out(amps, amps_o);
    amps->callback([&] {
        const auto& o = amps_o;
        action = [&] {
            return run_amplitudes({{"delay", o.delay}, {"n_max", o.n_max}, {"format", o.format}},
                                  resolve_out(o.out));
        };
    });

    Options series_o;
    auto* series = app.add_subcommand("series", "Truncated series p(A) or A(p) against exact values");
    auto* s_amp = series->add_option("--amplitude", series_o.amplitude, "Evaluate p(A) at this amplitude");
    auto* s_per = series->add_option("--period", series_o.period, "Evaluate A(p) at this minimal period");
    s_amp->excludes(s_per);
    series->add_option("--parity", series_o.parity, "even or odd")
        ->required()
        ->check(CLI::IsMember({"even", "odd"}));
    series->add_option("--order", series_o.order, "Highest power (default 11 for p(A), 9 for A(p))");
    add_format(series, series_o, "csv");
    add_out(series, series_o);
    series->callback([&] {
        auto& o = series_o;
        if (!o.amplitude && !o.period)
            throw CLI::ValidationError("series", "one of --amplitude or --period is required");
        if (o.order == 0)
            o.order = o.amplitude ? 11 : 9;
        action = [&] {
            return run_series({{"amplitude", nullable(o.amplitude)},
                               {"period", nullable(o.period)},
                               {"parity", o.parity},
                               {"order", o.order},
                               {"format", o.format}},
                              resolve_out(o.out));
        };
    });

    Options sim_o;
    auto* sim = app.add_subcommand("simulate", "Integrate the DDE from an elliptic cn history, write t,x,xdot CSV");
    sim->add_option("--delay", sim_o.delay, "Delay T")->required()->check(CLI::PositiveNumber);
    sim->add_option("--amplitude", sim_o.amplitude, "History amplitude (default: A_n when --n is given)");
    sim->add_option("--n", sim_o.opt_n, "Start on the lifted orbit x_n; also fixes the parity")
        ->check(CLI::PositiveNumber);
    sim->add_option("--parity", sim_o.parity, "History parity when --n is not given")
        ->check(CLI::IsMember({"even", "odd"}));
    sim->add_option("--t-end", sim_o.t_end, "End time")->required()->check(CLI::NonNegativeNumber);
    sim->add_option("--stride", sim_o.stride, "Write every stride-th accepted step")->check(CLI::PositiveNumber);
    add_solver(sim, sim_o, 1e-9);
    sim_o.out = "trajectory.csv";
    add_out(sim, sim_o);
    sim->callback([&] {
        auto& o = sim_o;
        if (o.opt_n) {
            const std::string par = parity_name(dd_parity_of(*o.opt_n));
            if (!o.parity.empty() && o.parity != par)
                throw CLI::ValidationError("--parity", "conflicts with the parity of --n");
            o.parity = par;
        }
        if (o.parity.empty())
            throw CLI::ValidationError("simulate", "--parity or --n is required");
        action = [&] {
            const double a = o.amplitude ? *o.amplitude : amplitude_of(o.delay, *o.opt_n);
            return run_simulate({{"delay", o.delay},
                                 {"amplitude", a},
                                 {"parity", o.parity},
                                 {"n", nullable(o.opt_n)},
                                 {"t_end", o.t_end},
                                 {"max_step", o.max_step},
                                 {"abs_tol", o.abs_tol},
                                 {"rel_tol", o.rel_tol},
                                 {"stride", o.stride}},
                                resolve_out(o.out));
        };
    });

    Options lift_o;
    auto* lift = app.add_subcommand("verify-lift", "Check x_n against the DDE and the shift identity");
    lift->add_option("--delay", lift_o.delay, "Delay T")->required()->check(CLI::PositiveNumber);
    lift->add_option("--n", lift_o.n, "Lift index")->required()->check(CLI::PositiveNumber);
    lift->add_option("--samples", lift_o.samples, "Sample points on [0, 2T]")->check(CLI::Range(2, 100000000));
    add_format(lift, lift_o, "json");
    add_out(lift, lift_o);
    lift->callback([&] {
        const auto& o = lift_o;
        action = [&] {
            return run_verify_lift({{"delay", o.delay}, {"n", o.n}, {"samples", o.samples}, {"format", o.format}},
                                   resolve_out(o.out));
        };
    });

    Options probe_o;
    auto* probe = app.add_subcommand("probe", "Convergence or heteroclinic probe, JSON verdict");
    probe->add_option("--delay", probe_o.delay, "Delay T")->required()->check(CLI::PositiveNumber);
    probe->add_option("--n", probe_o.n, "Target orbit index")->required()->check(CLI::PositiveNumber);
    auto* p_amp = probe->add_option("--amplitude", probe_o.amplitude, "Initial history amplitude");
    auto* p_near = probe->add_option("--near-n", probe_o.near_n, "Start near x_{near-n} (heteroclinic probe)")
                       ->check(CLI::PositiveNumber);
    auto* p_off = probe->add_option("--offset", probe_o.offset, "Amplitude offset from A_{near-n}");
    p_near->needs(p_off);
    p_off->needs(p_near);
    p_amp->excludes(p_near);
    probe_o.t_end = 100;
    probe->add_option("--t-end", probe_o.t_end, "End time")->check(CLI::PositiveNumber);
    add_solver(probe, probe_o, 1e-9);
    add_out(probe, probe_o);
    probe->callback([&] {
        const auto& o = probe_o;
        if (!o.amplitude && !o.near_n)
            throw CLI::ValidationError("probe", "--amplitude or --near-n/--offset is required");
        action = [&] {
            return run_probe({{"delay", o.delay},
                              {"n", o.n},
                              {"amplitude", nullable(o.amplitude)},
                              {"near_n", nullable(o.near_n)},
                              {"offset", o.near_n ? json(o.offset) : json(nullptr)},
                              {"t_end", o.t_end},
                              {"max_step", o.max_step},
                              {"abs_tol", o.abs_tol},
                              {"rel_tol", o.rel_tol}},
                             resolve_out(o.out));
        };
    });

    Options floq_o;
    auto* floq = app.add_subcommand("floquet", "Estimate the dominant Floquet exponent of x_n");
    floq->add_option("--delay", floq_o.delay, "Delay T")->required()->check(CLI::PositiveNumber);
    floq->add_option("--n", floq_o.n, "Lift index")->required()->check(CLI::PositiveNumber);
    floq->add_option("--perturbation", floq_o.perturbation, "Relative amplitude perturbation");
    floq_o.t_end = 200;
    floq->add_option("--t-end", floq_o.t_end, "End time")->check(CLI::PositiveNumber);
    add_solver(floq, floq_o, 1e-11);
    add_out(floq, floq_o);
    floq->callback([&] {
        const auto& o = floq_o;
        action = [&] {
            return run_floquet({{"delay", o.delay},
                                {"n", o.n},
                                {"perturbation", o.perturbation},
                                {"t_end", o.t_end},
                                {"max_step", o.max_step},
                                {"abs_tol", o.abs_tol},
                                {"rel_tol", o.rel_tol}},
                               resolve_out(o.out));
        };
    });

    std::string manifest;
    std::string out_dir;
    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest, "Manifest JSON")->required();
    replay->add_option("--out-dir", out_dir, "Write outputs here instead of the recorded paths");
    replay->callback([&] { action = [&] { return run_replay(manifest, out_dir); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        return action();
    } catch (const Failure& e) {
        std::cerr << "dduffing: " << e.what() << '\n';
        return e.code;
    } catch (const json::exception& e) {
        std::cerr << "dduffing: bad parameters: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "dduffing: " << e.what() << '\n';
        return exit_numerical;
    }
}
