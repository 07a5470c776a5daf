#pragma once

// Integration of  x''(t) + x(t - T) + x(t)^3 = 0  as the first-order system
// x' = v, v' = -x(t - T) - x^3, using the Bogacki-Shampine 3(2) pair with
// local extrapolation. The delayed value comes from the history function on
// [-T, 0] and from cubic Hermite dense output over accepted steps after that.
// Steps never exceed T, so x(t - T) always lies in already computed data.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "dduffing/duffing.hpp"

namespace dduffing {

/// Initial data on [-T, 0].
class HistoryFunction {
public:
    enum class Kind { elliptic_cn, tabulated, constant };

    struct Sample {
        double t;
        double x;
        double xdot;
    };

    /// (A cn(wt, m), -A w sn(wt, m) dn(wt, m)) with m, w from (A, parity).
    static HistoryFunction elliptic_cn(double amplitude, Parity parity);
    /// Samples sorted by strictly increasing t; x is interpolated by cubic
    /// Hermite using xdot as its derivative.
    static HistoryFunction tabulated(std::vector<Sample> samples);
    static HistoryFunction constant(double x0, double xdot0);

    Kind kind() const noexcept;
    PhasePoint operator()(double t) const;

    /// Covered time range. Unbounded for the analytic kinds.
    double t_min() const noexcept;
    double t_max() const noexcept;

    /// Orbit behind an elliptic_cn history, nullptr otherwise.
    const OdeOrbit* orbit() const noexcept { return std::get_if<OdeOrbit>(&data_); }

private:
    struct Constant {
        PhasePoint state;
    };
    using Data = std::variant<OdeOrbit, std::vector<Sample>, Constant>;

    explicit HistoryFunction(Data data) : data_(std::move(data)) {}

    Data data_;
};

struct SolverConfig {
    double max_step = 1e-4;
    double t_end = 0.0;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    /// Mesh points are forced onto k T for k = 1 .. breakpoint_count, where
    /// the solution's derivatives jump.
    int breakpoint_count = 10;
    /// When false, steps older than t - T are dropped as the integration
    /// advances; the returned trajectory then covers only its last delay
    /// interval. Use with an observer for long runs.
    bool retain_full = true;
};

/// Immutable record of one integration: the history plus every accepted
/// step with the data needed for Hermite interpolation.
class Trajectory {
public:
    struct Node {
        double t;
        double x;
        double v;
        double a;  // v' at t
    };

    Trajectory(double delay, HistoryFunction history, SolverConfig config, std::vector<Node> nodes)
        : delay_(delay), history_(std::move(history)), config_(config), nodes_(std::move(nodes)) {}

    double delay() const noexcept { return delay_; }
    const HistoryFunction& history() const noexcept { return history_; }
    const SolverConfig& config() const noexcept { return config_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    double t_end() const noexcept { return nodes_.back().t; }
    /// Earliest time state_at accepts: -T, or the oldest retained step.
    double t_begin() const noexcept { return nodes_.front().t == 0.0 ? -delay_ : nodes_.front().t; }
    std::size_t step_count() const noexcept { return nodes_.size() - 1; }

    /// Interpolated state at t in [t_begin, t_end]; exact at mesh points.
    /// Throws RangeError outside that range.
    PhasePoint state_at(double t) const;

    /// Writes header `t,x,xdot` and one row per stride-th accepted step,
    /// plus the final step, with 17 significant digits. A trajectory
    /// without steps writes the header only.
    void write_csv(std::ostream& out, std::size_t stride = 1) const;

private:
    double delay_;
    HistoryFunction history_;
    SolverConfig config_;
    std::vector<Node> nodes_;
};

using StepObserver = std::function<void(const Trajectory::Node&)>;

/// Throws ConfigError for invalid settings (including max_step > T) and
/// IntegrationDiverged when the state stops being finite. The observer, if
/// given, sees the t = 0 node and then every accepted step in order.
Trajectory integrate(double delay, const HistoryFunction& history, const SolverConfig& config,
                     const StepObserver& observer = {});

PhasePoint state_at(const Trajectory& trajectory, double t);

/// max |x(t)| over [t_end - window, t_end], sampled no coarser than max_step.
double tail_amplitude(const Trajectory& trajectory, double window);

// Cubic Hermite on [t0, t1] for a value y with derivative dy.
struct HermiteValue {
    double y;
    double dy;
};
HermiteValue hermite(double t0, double y0, double dy0, double t1, double y1, double dy1, double t);

}  // namespace dduffing
