#include "dduffing/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "dduffing/errors.hpp"
#include "json.hpp"

namespace dduffing {

namespace {

constexpr int kCoarseGrid = 256;
constexpr double kFloquetBandLow = 1e-10;
constexpr double kFloquetBandHigh = 1e-2;
// Fitted points must exceed the unperturbed control run's distance (the
// discretization floor) by this factor.
constexpr double kSignalToFloor = 10.0;
constexpr std::size_t kMinFitPoints = 5;

double squared_distance(PhasePoint a, PhasePoint b) {
    const double dx = a.x - b.x;
    const double dv = a.xdot - b.xdot;
    return dx * dx + dv * dv;
}

SolverConfig solver_config(double t_end, const ProbeOptions& o) {
    SolverConfig c;
    c.max_step = o.max_step;
    c.t_end = t_end;
    c.abs_tol = o.abs_tol;
    c.rel_tol = o.rel_tol;
    return c;
}

struct Run {
    std::shared_ptr<const Trajectory> trajectory;
    std::string diagnostic;  // non-empty if the integration blew up
};

Run run(double delay, const HistoryFunction& history, double t_end, const ProbeOptions& options) {
    try {
        return {std::make_shared<const Trajectory>(
                    integrate(delay, history, solver_config(t_end, options))),
                {}};
    } catch (const IntegrationDiverged& e) {
        return {e.partial(), e.what()};
    }
}

// Windowed maximum of the distance to `orbit`, computed on the fly from a
// bounded-memory integration. Window k covers [k w, (k + 1) w); the sample
// time reported is the window start. Distances are taken at the first
// accepted step at or after each multiple of the sampling interval.
std::vector<DistanceSample> streamed_envelope(double delay, const HistoryFunction& history,
                                              double t_end, const ProbeOptions& options,
                                              const OdeOrbit& orbit, double window) {
    std::vector<DistanceSample> envelope;
    double next_sample = 0.0;
    const auto observe = [&](const Trajectory::Node& node) {
        if (node.t < next_sample)
            return;
        next_sample = (std::floor(node.t / options.sample_interval) + 1.0) * options.sample_interval;
        const double d = orbit_distance(PhasePoint{node.x, node.v}, orbit);
        const auto k = static_cast<std::size_t>(node.t / window);
        while (envelope.size() <= k)
            envelope.push_back({static_cast<double>(envelope.size()) * window, 0.0});
        envelope[k].d = std::max(envelope[k].d, d);
    };
    SolverConfig config = solver_config(t_end, options);
    config.retain_full = false;
    try {
        integrate(delay, history, config, observe);
    } catch (const IntegrationDiverged&) {
        // Keep what was observed; the blow-up region is far outside the band.
    }
    return envelope;
}

// Fills every field except outcome.
Verdict measure(const Trajectory& traj, const OrbitSpec& target, const ProbeOptions& options) {
    Verdict v;
    v.target_n = target.n();
    v.target_amplitude = target.amplitude();
    v.distance_series = distance_series(traj, target.ode(), options.sample_interval);

    const double window = 2.0 * traj.delay();
    for (const auto& s : v.distance_series)
        if (s.t <= window)
            v.initial_distance = std::max(v.initial_distance, s.d);
    const double threshold = std::max(10.0 * v.initial_distance, options.escape_floor);
    const double window_start = traj.t_end() - window;
    for (const auto& s : v.distance_series) {
        v.peak_distance = std::max(v.peak_distance, s.d);
        if (v.escape_time < 0.0 && s.d >= threshold)
            v.escape_time = s.t;
        if (s.t >= window_start)
            v.final_distance = std::max(v.final_distance, s.d);
    }
    if (traj.t_end() > 2.0 * traj.delay())
        v.final_amplitude = tail_amplitude(traj, 2.0 * traj.delay());
    return v;
}

Outcome classify(const Verdict& v, const ProbeOptions& options, bool blew_up) {
    const bool escaped = v.initial_distance <= options.seed_tol && v.escape_time >= 0.0;
    if (blew_up)
        return Outcome::escaped_from;
    if (v.final_distance <= options.conv_tol &&
        std::abs(v.final_amplitude - v.target_amplitude) <= options.amp_tol)
        return Outcome::converged_to;
    if (escaped)
        return Outcome::escaped_from;
    return Outcome::undecided;
}

void check_options(const ProbeOptions& o) {
    if (!(o.sample_interval > 0.0))
        throw ConfigError("sample_interval must be positive");
    if (!(o.conv_tol > 0.0) || !(o.amp_tol > 0.0) || !(o.seed_tol > 0.0))
        throw ConfigError("probe tolerances must be positive");
}

}  // namespace

double orbit_distance(PhasePoint state, const OdeOrbit& orbit) {
    const double period = orbit.period();
    const double step = period / kCoarseGrid;
    int best = 0;
    double best_d2 = squared_distance(state, orbit.state(0.0));
    for (int i = 1; i < kCoarseGrid; ++i) {
        const double d2 = squared_distance(state, orbit.state(i * step));
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }

    const auto f = [&](double s) { return squared_distance(state, orbit.state(s)); };
    constexpr double inv_phi = 0.6180339887498948482;
    double a = (best - 1) * step;
    double b = (best + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * period; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    best_d2 = std::min({best_d2, fc, fd});
    return std::sqrt(best_d2);
}

double orbit_distance(PhasePoint state, const OrbitSpec& orbit) {
    return orbit_distance(state, orbit.ode());
}

std::vector<DistanceSample> distance_series(const Trajectory& trajectory, const OdeOrbit& orbit,
                                            double interval) {
    if (!(interval > 0.0))
        throw ConfigError("distance sampling interval must be positive");
    const double t_end = trajectory.t_end();
    std::vector<DistanceSample> out;
    out.reserve(static_cast<std::size_t>(t_end / interval) + 2);
    for (std::size_t i = 0;; ++i) {
        const double t = std::min(static_cast<double>(i) * interval, t_end);
        out.push_back({t, orbit_distance(trajectory.state_at(t), orbit)});
        if (t >= t_end)
            break;
    }
    return out;
}

const char* to_string(Outcome outcome) noexcept {
    switch (outcome) {
    case Outcome::converged_to:
        return "converged_to";
    case Outcome::escaped_from:
        return "escaped_from";
    default:
        return "undecided";
    }
}

Verdict convergence_probe(double delay, double initial_amplitude, int target_n, double t_end,
                          const ProbeOptions& options) {
    check_options(options);
    const OrbitSpec target = solve_amplitude(delay, target_n);
    const auto history = HistoryFunction::elliptic_cn(initial_amplitude, parity_of(target_n));
    const Run r = run(delay, history, t_end, options);

    Verdict v = measure(*r.trajectory, target, options);
    v.outcome = classify(v, options, !r.diagnostic.empty());
    v.diagnostic = r.diagnostic;
    return v;
}

HeteroclinicReport heteroclinic_probe(double delay, int near_n, double offset, int target_n,
                                      double t_end, const ProbeOptions& options) {
    check_options(options);
    if (parity_of(near_n) != Parity::even)
        throw ConfigError("heteroclinic probe starts near an unstable orbit: near_n must be even");
    if (parity_of(target_n) != Parity::odd)
        throw ConfigError("heteroclinic probe target_n must be odd");

    const OrbitSpec near = solve_amplitude(delay, near_n);
    const OrbitSpec target = solve_amplitude(delay, target_n);

    HeteroclinicReport report;
    report.initial_amplitude = near.amplitude() + offset;
    const auto history = HistoryFunction::elliptic_cn(report.initial_amplitude, near.parity());
    const Run r = run(delay, history, t_end, options);
    const bool blew_up = !r.diagnostic.empty();

    report.departure = measure(*r.trajectory, near, options);
    report.departure.outcome = classify(report.departure, options, blew_up);
    report.departure.diagnostic = r.diagnostic;

    report.arrival = measure(*r.trajectory, target, options);
    report.arrival.outcome = classify(report.arrival, options, blew_up);
    report.arrival.diagnostic = r.diagnostic;
    return report;
}

FloquetEstimate floquet_estimate(double delay, int n, double perturbation, double t_end,
                                 const ProbeOptions& options) {
    check_options(options);
    if (!(t_end >= 20.0 * delay))
        throw ConfigError("floquet_estimate needs t_end >= 20 T");
    if (!(std::abs(perturbation) > 0.0))
        throw ConfigError("perturbation must be non-zero");

    const OrbitSpec orbit = solve_amplitude(delay, n);
    FloquetEstimate est;
    est.predicted_sign = sign_of(orbit.parity());

    const double window = 2.0 * delay;
    const auto perturbed = streamed_envelope(
        delay, HistoryFunction::elliptic_cn(orbit.amplitude() * (1.0 + perturbation), orbit.parity()),
        t_end, options, orbit.ode(), window);
    const auto control = streamed_envelope(
        delay, HistoryFunction::elliptic_cn(orbit.amplitude(), orbit.parity()), t_end, options,
        orbit.ode(), window);
    est.envelope = perturbed;

    std::vector<DistanceSample> band;
    const std::size_t windows = std::min(perturbed.size(), control.size());
    for (std::size_t k = 1; k < windows; ++k) {
        const double d = perturbed[k].d;
        if (d >= kFloquetBandLow && d <= kFloquetBandHigh && d >= kSignalToFloor * control[k].d)
            band.push_back(perturbed[k]);
    }
    if (band.size() < kMinFitPoints)
        return est;

    double st = 0, sy = 0, stt = 0, sty = 0;
    for (const auto& b : band) {
        const double y = std::log(b.d);
        st += b.t;
        sy += y;
        stt += b.t * b.t;
        sty += b.t * y;
    }
    const double k = static_cast<double>(band.size());
    const double slope = (k * sty - st * sy) / (k * stt - st * st);
    const double intercept = (sy - slope * st) / k;
    double ss = 0;
    for (const auto& b : band) {
        const double r = std::log(b.d) - (intercept + slope * b.t);
        ss += r * r;
    }
    est.eta = slope;
    est.log_multiplier = window * slope;
    est.fit_residual = std::sqrt(ss / k);
    est.fit_start = band.front().t;
    est.fit_end = band.back().t;
    est.fit_points = band.size();
    est.decided = true;
    return est;
}

ProbeOptions floquet_options() {
    ProbeOptions o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-11;
    return o;
}

bool stability_region(double delay) {
    if (!(delay > 0.0))
        throw DomainError("delay T must be positive");
    // Every double near pi sqrt(3/2), including the correctly rounded one,
    // lies below it; delays within a few ulps count as on the boundary.
    constexpr double boundary = 3.847649490485592286632109;
    return delay < boundary * (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
}

std::string to_json(const ProbeRecord& r) {
    nlohmann::ordered_json j;
    j["T"] = r.delay;
    j["n"] = r.n;
    j["initial_A"] = r.initial_amplitude;
    j["outcome"] = to_string(r.outcome);
    j["final_amplitude"] = r.final_amplitude;
    j["eta"] = r.eta;
    j["fit_residual"] = r.fit_residual;
    return j.dump();
}

}  // namespace dduffing
