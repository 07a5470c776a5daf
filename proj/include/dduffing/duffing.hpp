#pragma once

// Periodic orbits of the Duffing oscillator  x'' + s x + x^3 = 0,  s = (-1)^n,
// and their lift to the delayed equation  x''(t) + x(t - T) + x(t)^3 = 0.

#include "dduffing/special_functions.hpp"

namespace dduffing {

/// Parity of the lift index n. Even: single well (s = +1). Odd: double
/// well (s = -1), orbits outside the figure-eight separatrix.
enum class Parity { even, odd };

Parity parity_of(int n);

/// (-1)^n.
constexpr int sign_of(Parity p) noexcept { return p == Parity::even ? 1 : -1; }

const char* to_string(Parity p) noexcept;

struct PhasePoint {
    double x;
    double xdot;
};

struct ModulusFrequency {
    double m;
    double omega;
};

/// m = A^2 / (2 (A^2 + s)), omega = sqrt(A^2 + s). Throws DomainError for
/// A <= 0, and for odd parity with A <= sqrt(2) + 1e-12 (H <= 0).
ModulusFrequency modulus_frequency(double amplitude, Parity parity);

/// Minimal period 4 K(m) / omega of the orbit with the given amplitude.
double minimal_period(double amplitude, Parity parity);

/// H = xdot^2 / 2 + s x^2 / 2 + x^4 / 4.
double energy(double x, double xdot, Parity parity);

/// A positive-energy periodic orbit of the non-delayed oscillator, started
/// at (A, 0). All derived quantities are computed from (A, parity) once.
class OdeOrbit {
public:
    OdeOrbit(double amplitude, Parity parity);

    double amplitude() const noexcept { return amplitude_; }
    Parity parity() const noexcept { return parity_; }
    double modulus() const noexcept { return jacobi_.parameter(); }
    double omega() const noexcept { return omega_; }
    double period() const noexcept { return period_; }
    double energy() const noexcept { return energy_; }

    /// (A cn(wt), -A w sn(wt) dn(wt)).
    PhasePoint state(double t) const;

private:
    OdeOrbit(double amplitude, Parity parity, ModulusFrequency mw);

    double amplitude_;
    Parity parity_;
    double omega_;
    JacobiElliptic jacobi_;
    double period_;
    double energy_;
};

/// An ODE orbit tagged with the lift index n and delay T.
///
/// `lifted` enforces the lift condition p = 2T/n to 1e-10 relative; it is
/// what solve_amplitude returns. `candidate` enforces every invariant except
/// that one, so deliberately mistuned orbits can be fed to lift_residual or
/// used as comparison targets.
class OrbitSpec {
public:
    static OrbitSpec lifted(int n, double delay, double amplitude);
    static OrbitSpec candidate(int n, double delay, double amplitude);

    int n() const noexcept { return n_; }
    double delay() const noexcept { return delay_; }
    Parity parity() const noexcept { return orbit_.parity(); }
    double amplitude() const noexcept { return orbit_.amplitude(); }
    double modulus() const noexcept { return orbit_.modulus(); }
    double omega() const noexcept { return orbit_.omega(); }
    double period() const noexcept { return orbit_.period(); }
    double energy() const noexcept { return orbit_.energy(); }
    const OdeOrbit& ode() const noexcept { return orbit_; }

    bool boundary_warning() const noexcept { return boundary_warning_; }
    void set_boundary_warning(bool on) noexcept { boundary_warning_ = on; }

private:
    OrbitSpec(int n, double delay, OdeOrbit orbit) : n_(n), delay_(delay), orbit_(orbit) {}

    int n_;
    double delay_;
    OdeOrbit orbit_;
    bool boundary_warning_ = false;
};

PhasePoint exact_solution(const OdeOrbit& orbit, double t);
PhasePoint exact_solution(const OrbitSpec& orbit, double t);

struct LiftResidual {
    double dde;    // max |x'' + x(t - T) + x^3|, x'' taken from the ODE
    double shift;  // max |x(t - T) - (-1)^n x(t)|
};

/// Both residuals over sample_count equispaced times in [0, 2T].
LiftResidual lift_residual(const OrbitSpec& orbit, int sample_count);

}  // namespace dduffing
