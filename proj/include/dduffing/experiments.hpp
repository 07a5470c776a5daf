#pragma once

// Numerical checks of the stability picture for the lifted orbits: convergence
// to x_n for odd n, escape from x_n for even n, and the growth/decay rate of
// small perturbations.

#include <string>
#include <vector>

#include "dduffing/amplitude.hpp"
#include "dduffing/dde_solver.hpp"

namespace dduffing {

/// Phase-minimized Euclidean distance in the (x, xdot) plane from `state` to
/// the closed orbit: a 256-point grid over one period, refined by golden
/// section around the best grid point.
double orbit_distance(PhasePoint state, const OdeOrbit& orbit);
double orbit_distance(PhasePoint state, const OrbitSpec& orbit);

struct DistanceSample {
    double t;
    double d;
};

/// orbit_distance of the trajectory state at t = 0, interval, 2 interval, ...
/// up to t_end (always included).
std::vector<DistanceSample> distance_series(const Trajectory& trajectory, const OdeOrbit& orbit,
                                            double interval);

enum class Outcome { converged_to, escaped_from, undecided };

const char* to_string(Outcome outcome) noexcept;

struct ProbeOptions {
    double max_step = 1e-4;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double sample_interval = 0.01;
    /// converged_to: trailing-window distance and |tail amplitude - A_n|.
    double conv_tol = 1e-3;
    double amp_tol = 1e-3;
    /// escaped_from: start within seed_tol, later reach
    /// max(10 * initial distance, escape_floor).
    double seed_tol = 1.0;
    double escape_floor = 1e-2;
};

struct Verdict {
    Outcome outcome = Outcome::undecided;
    int target_n = 0;
    double target_amplitude = 0.0;
    /// Largest distance over the first window [0, 2T].
    double initial_distance = 0.0;
    /// Largest distance over the trailing window [t_end - 2T, t_end].
    double final_distance = 0.0;
    double peak_distance = 0.0;
    /// First time the distance reached the escape threshold; negative if never.
    double escape_time = -1.0;
    double final_amplitude = 0.0;
    std::vector<DistanceSample> distance_series;
    std::string diagnostic;
};

/// Integrate from the elliptic_cn history of amplitude initial_A (parity of
/// target_n) and judge the outcome against x_{target_n}.
Verdict convergence_probe(double delay, double initial_amplitude, int target_n, double t_end,
                          const ProbeOptions& options = {});

struct HeteroclinicReport {
    double initial_amplitude = 0.0;
    Verdict departure;  // relative to x_{near_n}
    Verdict arrival;    // relative to x_{target_n}
};

/// Start at amplitude A_{near_n} + offset (near_n even, target_n odd) and
/// report escape from x_{near_n} and arrival at x_{target_n}.
HeteroclinicReport heteroclinic_probe(double delay, int near_n, double offset, int target_n,
                                      double t_end, const ProbeOptions& options = {});

struct FloquetEstimate {
    /// Fitted exponential rate of the distance to x_n (1/time).
    double eta = 0.0;
    /// 2T eta: log of the perturbation growth over one common period 2T,
    /// the quantity whose large-n asymptotics is (2/3) T^2 in magnitude.
    double log_multiplier = 0.0;
    double fit_start = 0.0;
    double fit_end = 0.0;
    /// RMS deviation of log(distance) from the fitted line.
    double fit_residual = 0.0;
    /// Sign expected from the stability theorems: -1 (decay) for odd n,
    /// +1 (growth) for even n.
    int predicted_sign = 0;
    /// False when fewer than five envelope points cleared the band and floor
    /// filters; eta is then meaningless.
    bool decided = false;
    std::size_t fit_points = 0;
    /// Largest distance in each window [2kT, 2(k+1)T), stamped at its start.
    std::vector<DistanceSample> envelope;
};

/// Tighter solver tolerances (1e-11) so the discretization floor sits well
/// below the perturbation.
ProbeOptions floquet_options();

/// Rate of an amplitude perturbation A_n (1 + perturbation) of x_n: a
/// least-squares fit of log distance over the windows where the distance is
/// in [1e-10, 1e-2] and at least 10x the distance of an unperturbed control
/// run integrated with the same settings. Both runs are streamed, so memory
/// does not grow with t_end.
FloquetEstimate floquet_estimate(double delay, int n, double perturbation, double t_end,
                                 const ProbeOptions& options = floquet_options());

/// T^2 < 3 pi^2 / 2.
bool stability_region(double delay);

/// Flat record for JSON export.
struct ProbeRecord {
    double delay = 0.0;
    int n = 0;
    double initial_amplitude = 0.0;
    Outcome outcome = Outcome::undecided;
    double final_amplitude = 0.0;
    double eta = 0.0;
    double fit_residual = 0.0;
};

/// {"T", "n", "initial_A", "outcome", "final_amplitude", "eta", "fit_residual"}.
std::string to_json(const ProbeRecord& record);

}  // namespace dduffing
