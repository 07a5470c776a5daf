#include "dduffing/dde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "dduffing/errors.hpp"

namespace dduffing {

HermiteValue hermite(double t0, double y0, double dy0, double t1, double y1, double dy1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double y = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * h * dy0 +
                     (3.0 * s2 - 2.0 * s3) * y1 + (s3 - s2) * h * dy1;
    const double dy = 6.0 * (s2 - s) / h * (y0 - y1) + (3.0 * s2 - 4.0 * s + 1.0) * dy0 +
                      (3.0 * s2 - 2.0 * s) * dy1;
    return {y, dy};
}

// --- HistoryFunction -------------------------------------------------------

HistoryFunction HistoryFunction::elliptic_cn(double amplitude, Parity parity) {
    return HistoryFunction(OdeOrbit(amplitude, parity));
}

HistoryFunction HistoryFunction::tabulated(std::vector<Sample> samples) {
    if (samples.size() < 2)
        throw ConfigError("tabulated history needs at least two samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw ConfigError("tabulated history times must be strictly increasing");
    for (const auto& s : samples)
        if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.xdot))
            throw ConfigError("tabulated history contains non-finite values");
    return HistoryFunction(std::move(samples));
}

HistoryFunction HistoryFunction::constant(double x0, double xdot0) {
    return HistoryFunction(Constant{{x0, xdot0}});
}

HistoryFunction::Kind HistoryFunction::kind() const noexcept {
    switch (data_.index()) {
    case 0:
        return Kind::elliptic_cn;
    case 1:
        return Kind::tabulated;
    default:
        return Kind::constant;
    }
}

double HistoryFunction::t_min() const noexcept {
    if (const auto* s = std::get_if<std::vector<Sample>>(&data_))
        return s->front().t;
    return -std::numeric_limits<double>::infinity();
}

double HistoryFunction::t_max() const noexcept {
    if (const auto* s = std::get_if<std::vector<Sample>>(&data_))
        return s->back().t;
    return std::numeric_limits<double>::infinity();
}

PhasePoint HistoryFunction::operator()(double t) const {
    if (const auto* orbit = std::get_if<OdeOrbit>(&data_))
        return orbit->state(t);
    if (const auto* c = std::get_if<Constant>(&data_))
        return c->state;

    const auto& samples = std::get<std::vector<Sample>>(data_);
    t = std::clamp(t, samples.front().t, samples.back().t);
    auto hi = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const Sample& s) { return v < s.t; });
    if (hi == samples.end())
        return {samples.back().x, samples.back().xdot};
    if (hi == samples.begin())
        ++hi;
    const auto lo = hi - 1;
    const auto [x, dx] = hermite(lo->t, lo->x, lo->xdot, hi->t, hi->x, hi->xdot, t);
    return {x, dx};
}

// --- Trajectory ------------------------------------------------------------

PhasePoint Trajectory::state_at(double t) const {
    if (!(t >= t_begin() && t <= t_end())) {
        std::ostringstream os;
        os.precision(17);
        os << "time " << t << " outside trajectory range [" << t_begin() << ", " << t_end() << "]";
        throw RangeError(os.str());
    }
    if (t < nodes_.front().t || (t == 0.0 && nodes_.size() == 1))
        return history_(t);

    auto hi = std::lower_bound(nodes_.begin(), nodes_.end(), t,
                               [](const Node& n, double v) { return n.t < v; });
    if (hi->t == t)
        return {hi->x, hi->v};
    const auto lo = hi - 1;
    const double x = hermite(lo->t, lo->x, lo->v, hi->t, hi->x, hi->v, t).y;
    const double v = hermite(lo->t, lo->v, lo->a, hi->t, hi->v, hi->a, t).y;
    return {x, v};
}

void Trajectory::write_csv(std::ostream& out, std::size_t stride) const {
    if (stride == 0)
        throw ConfigError("CSV stride must be >= 1");
    const auto old_precision = out.precision(17);
    out << "t,x,xdot\n";
    const std::size_t last = nodes_.size() - 1;
    for (std::size_t i = 1; i <= last; ++i) {
        if (i % stride != 0 && i != last)
            continue;
        const Node& n = nodes_[i];
        out << n.t << ',' << n.x << ',' << n.v << '\n';
    }
    out.precision(old_precision);
}

PhasePoint state_at(const Trajectory& trajectory, double t) { return trajectory.state_at(t); }

double tail_amplitude(const Trajectory& trajectory, double window) {
    const double t_end = trajectory.t_end();
    if (!(window > 0.0) || !(window < t_end))
        throw RangeError("tail window must satisfy 0 < window < t_end");
    const double t0 = t_end - window;
    const auto samples =
        static_cast<std::size_t>(std::ceil(window / trajectory.config().max_step)) + 1;
    double peak = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = i == samples ? t_end : t0 + window * static_cast<double>(i) / samples;
        peak = std::max(peak, std::abs(trajectory.state_at(t).x));
    }
    return peak;
}

// --- integrate -------------------------------------------------------------

namespace {

void validate(double delay, const HistoryFunction& history, const SolverConfig& c) {
    if (!(delay > 0.0) || !std::isfinite(delay))
        throw ConfigError("delay T must be positive and finite");
    if (!(c.max_step > 0.0))
        throw ConfigError("max_step must be positive");
    if (c.max_step > delay)
        throw ConfigError("max_step must not exceed the delay T");
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end))
        throw ConfigError("t_end must be finite and >= 0");
    if (!(c.abs_tol > 0.0) || !(c.rel_tol >= 0.0))
        throw ConfigError("tolerances must be positive");
    if (c.breakpoint_count < 0)
        throw ConfigError("breakpoint_count must be >= 0");
    if (history.t_min() > -delay || history.t_max() < 0.0)
        throw ConfigError("history does not cover [-T, 0]");
}

// Delayed lookups move forward almost monotonically, so a cursor replaces
// a binary search per stage.
class DelayedLookup {
public:
    DelayedLookup(const HistoryFunction& history, const std::vector<Trajectory::Node>& nodes)
        : history_(history), nodes_(nodes) {}

    // Drop nodes no longer reachable by t - T. Erases only once the stale
    // prefix is the larger half, so the cost stays linear overall.
    void prune(std::vector<Trajectory::Node>& nodes, double oldest_needed) {
        std::size_t keep = cursor_;
        while (keep + 1 < nodes.size() && nodes[keep + 1].t <= oldest_needed)
            ++keep;
        if (keep < 4096 || keep < nodes.size() / 2)
            return;
        nodes.erase(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(keep));
        cursor_ -= std::min(cursor_, keep);
    }

    double operator()(double s) {
        if (s <= 0.0)
            return history_(s).x;
        const std::size_t last = nodes_.size() - 1;
        if (s >= nodes_[last].t)
            return nodes_[last].x;
        while (cursor_ + 1 < last && nodes_[cursor_ + 1].t < s)
            ++cursor_;
        while (cursor_ > 0 && nodes_[cursor_].t > s)
            --cursor_;
        const auto& lo = nodes_[cursor_];
        const auto& hi = nodes_[cursor_ + 1];
        return hermite(lo.t, lo.x, lo.v, hi.t, hi.x, hi.v, s).y;
    }

private:
    const HistoryFunction& history_;
    const std::vector<Trajectory::Node>& nodes_;
    std::size_t cursor_ = 0;
};

bool finite(double a, double b) { return std::isfinite(a) && std::isfinite(b); }

}  // namespace

Trajectory integrate(double delay, const HistoryFunction& history, const SolverConfig& config,
                     const StepObserver& observer) {
    validate(delay, history, config);

    std::vector<Trajectory::Node> nodes;
    if (config.retain_full)
        nodes.reserve(static_cast<std::size_t>(config.t_end / config.max_step) + 16);

    DelayedLookup delayed(history, nodes);
    const auto accel = [&](double t, double x) { return -delayed(t - delay) - x * x * x; };

    const PhasePoint start = history(0.0);
    nodes.push_back({0.0, start.x, start.xdot, 0.0});
    nodes.back().a = accel(0.0, start.x);
    if (!finite(start.x, start.xdot) || !std::isfinite(nodes.back().a))
        throw ConfigError("history is not finite at t = 0");
    if (observer)
        observer(nodes.back());

    const auto diverged = [&](double t) {
        std::ostringstream os;
        os.precision(17);
        os << "integration diverged after t = " << t;
        auto partial = std::make_shared<const Trajectory>(delay, history, config, nodes);
        return IntegrationDiverged(os.str(), t, std::move(partial));
    };

    double t = 0.0;
    double h = config.max_step;
    int next_breakpoint = 1;

    while (t < config.t_end) {
        const auto& cur = nodes.back();
        h = std::min(h, config.max_step);
        const double h_trial = h;

        double t_new = t + h;
        bool pinned = false;
        while (next_breakpoint <= config.breakpoint_count && next_breakpoint * delay <= t)
            ++next_breakpoint;
        if (next_breakpoint <= config.breakpoint_count && t_new >= next_breakpoint * delay) {
            t_new = next_breakpoint * delay;
            pinned = true;
        }
        if (t_new >= config.t_end) {
            t_new = config.t_end;
            pinned = true;
        }
        h = t_new - t;

        // Bogacki-Shampine stages; k1 = (cur.v, cur.a) by FSAL.
        const double x2 = cur.x + 0.5 * h * cur.v;
        const double v2 = cur.v + 0.5 * h * cur.a;
        const double a2 = accel(t + 0.5 * h, x2);

        const double x3 = cur.x + 0.75 * h * v2;
        const double v3 = cur.v + 0.75 * h * a2;
        const double a3 = accel(t + 0.75 * h, x3);

        const double x_new = cur.x + h * (2.0 / 9.0 * cur.v + 1.0 / 3.0 * v2 + 4.0 / 9.0 * v3);
        const double v_new = cur.v + h * (2.0 / 9.0 * cur.a + 1.0 / 3.0 * a2 + 4.0 / 9.0 * a3);
        const double a_new = accel(t_new, x_new);

        if (!finite(x_new, v_new) || !std::isfinite(a_new))
            throw diverged(t);

        // Difference to the embedded second-order solution.
        const double ex = h * (-5.0 / 72.0 * cur.v + 1.0 / 12.0 * v2 + 1.0 / 9.0 * v3 - 0.125 * v_new);
        const double ev = h * (-5.0 / 72.0 * cur.a + 1.0 / 12.0 * a2 + 1.0 / 9.0 * a3 - 0.125 * a_new);
        const double sx = config.abs_tol + config.rel_tol * std::max(std::abs(cur.x), std::abs(x_new));
        const double sv = config.abs_tol + config.rel_tol * std::max(std::abs(cur.v), std::abs(v_new));
        const double err = std::max(std::abs(ex) / sx, std::abs(ev) / sv);

        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::cbrt(1.0 / err), 0.2, 5.0);
        if (err > 1.0) {
            h *= factor;
            if (h < 1e-14 * std::max(1.0, t))
                throw diverged(t);
            continue;
        }

        nodes.push_back({t_new, x_new, v_new, a_new});
        t = t_new;
        if (observer)
            observer(nodes.back());
        if (!config.retain_full)
            delayed.prune(nodes, t - delay);
        // A step clipped onto a breakpoint or t_end says nothing about the
        // size of the next one.
        h = pinned ? h_trial : h * factor;
    }

    return Trajectory(delay, history, config, std::move(nodes));
}

}  // namespace dduffing
