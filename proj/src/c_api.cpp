#include "dduffing/dduffing.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "dduffing/amplitude.hpp"
#include "dduffing/dde_solver.hpp"
#include "dduffing/errors.hpp"
#include "dduffing/experiments.hpp"

struct dd_orbit {
    dduffing::OrbitSpec spec;
};

struct dd_trajectory {
    std::shared_ptr<const dduffing::Trajectory> trajectory;
};

namespace {

thread_local std::string last_error;

dd_status fail(dd_status status, const char* what) {
    last_error = what;
    return status;
}

template <class F>
dd_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return DD_OK;
    } catch (const dduffing::IntegrationDiverged& e) {
        return fail(DD_ERR_DIVERGED, e.what());
    } catch (const dduffing::DomainError& e) {
        return fail(DD_ERR_DOMAIN, e.what());
    } catch (const dduffing::NoSolutionError& e) {
        return fail(DD_ERR_NO_SOLUTION, e.what());
    } catch (const dduffing::NumericalError& e) {
        return fail(DD_ERR_NUMERICAL, e.what());
    } catch (const dduffing::RangeError& e) {
        return fail(DD_ERR_RANGE, e.what());
    } catch (const dduffing::ConfigError& e) {
        return fail(DD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DD_ERR_INTERNAL, "unknown error");
    }
}

#define DD_REQUIRE(cond)                                                         \
    do {                                                                         \
        if (!(cond))                                                             \
            return fail(DD_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
    } while (0)

dduffing::Parity to_parity(dd_parity p) {
    if (p == DD_PARITY_EVEN)
        return dduffing::Parity::even;
    if (p == DD_PARITY_ODD)
        return dduffing::Parity::odd;
    throw dduffing::ConfigError("unknown parity value");
}

dduffing::ProbeOptions to_options(const dd_probe_options* o, bool floquet) {
    if (!o)
        return floquet ? dduffing::floquet_options() : dduffing::ProbeOptions{};
    dduffing::ProbeOptions r;
    r.max_step = o->max_step;
    r.abs_tol = o->abs_tol;
    r.rel_tol = o->rel_tol;
    r.sample_interval = o->sample_interval;
    r.conv_tol = o->conv_tol;
    r.amp_tol = o->amp_tol;
    r.seed_tol = o->seed_tol;
    r.escape_floor = o->escape_floor;
    return r;
}

void from_options(const dduffing::ProbeOptions& o, dd_probe_options* out) {
    out->max_step = o.max_step;
    out->abs_tol = o.abs_tol;
    out->rel_tol = o.rel_tol;
    out->sample_interval = o.sample_interval;
    out->conv_tol = o.conv_tol;
    out->amp_tol = o.amp_tol;
    out->seed_tol = o.seed_tol;
    out->escape_floor = o.escape_floor;
}

dd_outcome to_c(dduffing::Outcome o) {
    switch (o) {
    case dduffing::Outcome::converged_to: return DD_CONVERGED_TO;
    case dduffing::Outcome::escaped_from: return DD_ESCAPED_FROM;
    case dduffing::Outcome::undecided: break;
    }
    return DD_UNDECIDED;
}

dduffing::Outcome from_c(dd_outcome o) {
    switch (o) {
    case DD_CONVERGED_TO: return dduffing::Outcome::converged_to;
    case DD_ESCAPED_FROM: return dduffing::Outcome::escaped_from;
    case DD_UNDECIDED: return dduffing::Outcome::undecided;
    }
    throw dduffing::ConfigError("unknown outcome value");
}

void to_c(const dduffing::Verdict& v, dd_verdict* out) {
    out->outcome = to_c(v.outcome);
    out->target_n = v.target_n;
    out->target_amplitude = v.target_amplitude;
    out->initial_distance = v.initial_distance;
    out->final_distance = v.final_distance;
    out->peak_distance = v.peak_distance;
    out->escape_time = v.escape_time;
    out->final_amplitude = v.final_amplitude;
    out->blew_up = !v.diagnostic.empty();
}

dduffing::HistoryFunction to_history(const dd_history& h) {
    switch (h.kind) {
    case DD_HISTORY_ELLIPTIC_CN:
        return dduffing::HistoryFunction::elliptic_cn(h.amplitude, to_parity(h.parity));
    case DD_HISTORY_TABULATED: {
        if (h.count > 0 && (!h.t || !h.x || !h.xdot))
            throw dduffing::ConfigError("tabulated history needs t, x and xdot arrays");
        std::vector<dduffing::HistoryFunction::Sample> samples(h.count);
        for (std::size_t i = 0; i < h.count; ++i)
            samples[i] = {h.t[i], h.x[i], h.xdot[i]};
        return dduffing::HistoryFunction::tabulated(std::move(samples));
    }
    case DD_HISTORY_CONSTANT:
        return dduffing::HistoryFunction::constant(h.x0, h.xdot0);
    }
    throw dduffing::ConfigError("unknown history kind");
}

dd_status make_orbit(dduffing::OrbitSpec (*factory)(int, double, double), int n, double delay,
                     double amplitude, dd_orbit** out) {
    DD_REQUIRE(out);
    *out = nullptr;
    return guard([&] { *out = new dd_orbit{factory(n, delay, amplitude)}; });
}

}  // namespace

extern "C" {

const char* dd_version(void) { return DDUFFING_VERSION_STRING; }

const char* dd_last_error(void) { return last_error.c_str(); }

const char* dd_status_string(dd_status status) {
    switch (status) {
    case DD_OK: return "ok";
    case DD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DD_ERR_DOMAIN: return "domain error";
    case DD_ERR_NO_SOLUTION: return "no solution";
    case DD_ERR_NUMERICAL: return "numerical failure";
    case DD_ERR_DIVERGED: return "integration diverged";
    case DD_ERR_RANGE: return "out of range";
    case DD_ERR_IO: return "i/o error";
    case DD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

dd_status dd_elliptic_k(double m, double* out) {
    DD_REQUIRE(out);
    return guard([&] { *out = dduffing::elliptic_k(m); });
}

dd_status dd_jacobi_cn_sn_dn(double u, double m, double* cn, double* sn, double* dn) {
    DD_REQUIRE(cn && sn && dn);
    return guard([&] {
        const auto r = dduffing::jacobi_cn_sn_dn(u, m);
        *cn = r.cn;
        *sn = r.sn;
        *dn = r.dn;
    });
}

double dd_gamma_quarter_squared(void) { return dduffing::gamma_quarter_squared(); }

dd_parity dd_parity_of(int n) { return n % 2 == 0 ? DD_PARITY_EVEN : DD_PARITY_ODD; }

dd_status dd_modulus_frequency(double amplitude, dd_parity parity, double* m, double* omega) {
    DD_REQUIRE(m && omega);
    return guard([&] {
        const auto r = dduffing::modulus_frequency(amplitude, to_parity(parity));
        *m = r.m;
        *omega = r.omega;
    });
}

dd_status dd_minimal_period(double amplitude, dd_parity parity, double* out) {
    DD_REQUIRE(out);
    return guard([&] { *out = dduffing::minimal_period(amplitude, to_parity(parity)); });
}

double dd_energy(double x, double xdot, dd_parity parity) {
    return dduffing::energy(x, xdot, parity == DD_PARITY_ODD ? dduffing::Parity::odd : dduffing::Parity::even);
}

dd_status dd_orbit_solve(double delay, int n, dd_orbit** out) {
    DD_REQUIRE(out);
    *out = nullptr;
    return guard([&] { *out = new dd_orbit{dduffing::solve_amplitude(delay, n)}; });
}

dd_status dd_orbit_lifted(int n, double delay, double amplitude, dd_orbit** out) {
    return make_orbit(&dduffing::OrbitSpec::lifted, n, delay, amplitude, out);
}

dd_status dd_orbit_candidate(int n, double delay, double amplitude, dd_orbit** out) {
    return make_orbit(&dduffing::OrbitSpec::candidate, n, delay, amplitude, out);
}

void dd_orbit_free(dd_orbit* orbit) { delete orbit; }

dd_status dd_orbit_get_info(const dd_orbit* orbit, dd_orbit_info* out) {
    DD_REQUIRE(orbit && out);
    const auto& s = orbit->spec;
    out->n = s.n();
    out->parity = s.parity() == dduffing::Parity::even ? DD_PARITY_EVEN : DD_PARITY_ODD;
    out->delay = s.delay();
    out->amplitude = s.amplitude();
    out->modulus = s.modulus();
    out->omega = s.omega();
    out->period = s.period();
    out->energy = s.energy();
    out->boundary_warning = s.boundary_warning();
    return DD_OK;
}

dd_status dd_orbit_state(const dd_orbit* orbit, double t, double* x, double* xdot) {
    DD_REQUIRE(orbit && x && xdot);
    return guard([&] {
        const auto p = dduffing::exact_solution(orbit->spec, t);
        *x = p.x;
        *xdot = p.xdot;
    });
}

dd_status dd_orbit_lift_residual(const dd_orbit* orbit, int sample_count, double* dde_residual,
                                 double* shift_residual) {
    DD_REQUIRE(orbit && dde_residual && shift_residual);
    return guard([&] {
        const auto r = dduffing::lift_residual(orbit->spec, sample_count);
        *dde_residual = r.dde;
        *shift_residual = r.shift;
    });
}

dd_status dd_orbit_distance(const dd_orbit* orbit, double x, double xdot, double* out) {
    DD_REQUIRE(orbit && out);
    return guard([&] { *out = dduffing::orbit_distance({x, xdot}, orbit->spec); });
}

dd_status dd_series_period(double amplitude, dd_parity parity, int max_power, double* out) {
    DD_REQUIRE(out);
    return guard([&] {
        *out = dduffing::series_period_of_amplitude(amplitude, to_parity(parity), dduffing::SeriesOrder{max_power});
    });
}

dd_status dd_series_amplitude(double period, dd_parity parity, int max_power, double* out) {
    DD_REQUIRE(out);
    return guard([&] {
        *out = dduffing::series_amplitude_of_period(period, to_parity(parity), dduffing::SeriesOrder{max_power});
    });
}

dd_status dd_shared_amplitude(double delay, int n, double delay2, int n2, int* out) {
    DD_REQUIRE(out);
    return guard([&] { *out = dduffing::shared_amplitude(delay, n, delay2, n2); });
}

void dd_solver_config_default(dd_solver_config* config) {
    if (!config)
        return;
    const dduffing::SolverConfig d;
    config->max_step = d.max_step;
    config->t_end = d.t_end;
    config->abs_tol = d.abs_tol;
    config->rel_tol = d.rel_tol;
    config->breakpoint_count = d.breakpoint_count;
}

dd_status dd_integrate(double delay, const dd_history* history, const dd_solver_config* config,
                       dd_trajectory** out) {
    DD_REQUIRE(history && config && out);
    *out = nullptr;
    return guard([&] {
        dduffing::SolverConfig c;
        c.max_step = config->max_step;
        c.t_end = config->t_end;
        c.abs_tol = config->abs_tol;
        c.rel_tol = config->rel_tol;
        c.breakpoint_count = config->breakpoint_count;
        try {
            auto traj = dduffing::integrate(delay, to_history(*history), c);
            *out = new dd_trajectory{std::make_shared<const dduffing::Trajectory>(std::move(traj))};
        } catch (const dduffing::IntegrationDiverged& e) {
            if (e.partial())
                *out = new dd_trajectory{e.partial()};
            throw;
        }
    });
}

void dd_trajectory_free(dd_trajectory* trajectory) { delete trajectory; }

double dd_trajectory_t_end(const dd_trajectory* trajectory) {
    return trajectory ? trajectory->trajectory->t_end() : std::nan("");
}

size_t dd_trajectory_step_count(const dd_trajectory* trajectory) {
    return trajectory ? trajectory->trajectory->step_count() : 0;
}

dd_status dd_trajectory_state_at(const dd_trajectory* trajectory, double t, double* x, double* xdot) {
    DD_REQUIRE(trajectory && x && xdot);
    return guard([&] {
        const auto p = trajectory->trajectory->state_at(t);
        *x = p.x;
        *xdot = p.xdot;
    });
}

dd_status dd_trajectory_tail_amplitude(const dd_trajectory* trajectory, double window, double* out) {
    DD_REQUIRE(trajectory && out);
    return guard([&] { *out = dduffing::tail_amplitude(*trajectory->trajectory, window); });
}

dd_status dd_trajectory_write_csv(const dd_trajectory* trajectory, const char* path, size_t stride) {
    DD_REQUIRE(trajectory && path);
    if (stride == 0)
        return fail(DD_ERR_INVALID_ARGUMENT, "stride must be positive");
    std::ofstream file(path, std::ios::binary);
    if (!file)
        return fail(DD_ERR_IO, ("cannot open " + std::string(path)).c_str());
    const dd_status status = guard([&] { trajectory->trajectory->write_csv(file, stride); });
    if (status != DD_OK)
        return status;
    file.close();
    if (!file)
        return fail(DD_ERR_IO, ("write failed: " + std::string(path)).c_str());
    return DD_OK;
}

void dd_probe_options_default(dd_probe_options* options) {
    if (options)
        from_options(dduffing::ProbeOptions{}, options);
}

void dd_floquet_options_default(dd_probe_options* options) {
    if (options)
        from_options(dduffing::floquet_options(), options);
}

dd_status dd_convergence_probe(double delay, double initial_amplitude, int target_n, double t_end,
                               const dd_probe_options* options, dd_verdict* out) {
    DD_REQUIRE(out);
    return guard([&] {
        const auto v = dduffing::convergence_probe(delay, initial_amplitude, target_n, t_end,
                                                   to_options(options, false));
        to_c(v, out);
    });
}

dd_status dd_heteroclinic_probe(double delay, int near_n, double offset, int target_n, double t_end,
                                const dd_probe_options* options, double* initial_amplitude,
                                dd_verdict* departure, dd_verdict* arrival) {
    DD_REQUIRE(initial_amplitude && departure && arrival);
    return guard([&] {
        const auto r = dduffing::heteroclinic_probe(delay, near_n, offset, target_n, t_end,
                                                    to_options(options, false));
        *initial_amplitude = r.initial_amplitude;
        to_c(r.departure, departure);
        to_c(r.arrival, arrival);
    });
}

dd_status dd_floquet_estimate(double delay, int n, double perturbation, double t_end,
                              const dd_probe_options* options, dd_floquet* out) {
    DD_REQUIRE(out);
    return guard([&] {
        const auto f = dduffing::floquet_estimate(delay, n, perturbation, t_end, to_options(options, true));
        out->eta = f.eta;
        out->log_multiplier = f.log_multiplier;
        out->fit_start = f.fit_start;
        out->fit_end = f.fit_end;
        out->fit_residual = f.fit_residual;
        out->predicted_sign = f.predicted_sign;
        out->decided = f.decided;
        out->fit_points = f.fit_points;
    });
}

dd_status dd_stability_region(double delay, int* out) {
    DD_REQUIRE(out);
    return guard([&] { *out = dduffing::stability_region(delay); });
}

char* dd_probe_record_json(const dd_probe_record* record) {
    if (!record) {
        fail(DD_ERR_INVALID_ARGUMENT, "null record");
        return nullptr;
    }
    char* result = nullptr;
    guard([&] {
        dduffing::ProbeRecord r;
        r.delay = record->delay;
        r.n = record->n;
        r.initial_amplitude = record->initial_amplitude;
        r.outcome = from_c(record->outcome);
        r.final_amplitude = record->final_amplitude;
        r.eta = record->eta;
        r.fit_residual = record->fit_residual;
        const std::string s = dduffing::to_json(r);
        result = new char[s.size() + 1];
        std::memcpy(result, s.c_str(), s.size() + 1);
    });
    return result;
}

void dd_string_free(char* s) { delete[] s; }

}  // extern "C"
