#include "dduffing/duffing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dduffing/errors.hpp"

namespace dduffing {

namespace {

// Odd-parity orbits need H > 0, i.e. A > sqrt(2). The margin keeps m away
// from 1 where K(m) diverges.
constexpr double kSeparatrixMargin = 1e-12;

// Accepted mismatch between 4K/omega and 2T/n for a lifted orbit.
constexpr double kLiftTolerance = 1e-10;

std::string describe(double amplitude, Parity parity) {
    std::ostringstream os;
    os.precision(17);
    os << "amplitude " << amplitude << " (" << to_string(parity) << " parity)";
    return os.str();
}

}  // namespace

Parity parity_of(int n) { return (n % 2 == 0) ? Parity::even : Parity::odd; }

const char* to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

ModulusFrequency modulus_frequency(double amplitude, Parity parity) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw DomainError(describe(amplitude, parity) + ": amplitude must be positive and finite");
    if (parity == Parity::odd && !(amplitude > std::numbers::sqrt2 + kSeparatrixMargin))
        throw DomainError(describe(amplitude, parity) +
                          ": inside/on separatrix, H <= 0 (odd parity needs A > sqrt(2))");
    const double a2 = amplitude * amplitude;
    const double s = sign_of(parity);
    return {a2 / (2.0 * (a2 + s)), std::sqrt(a2 + s)};
}

double minimal_period(double amplitude, Parity parity) {
    const auto [m, omega] = modulus_frequency(amplitude, parity);
    return 4.0 * elliptic_k(m) / omega;
}

double energy(double x, double xdot, Parity parity) {
    const double x2 = x * x;
    return 0.5 * xdot * xdot + 0.5 * sign_of(parity) * x2 + 0.25 * x2 * x2;
}

OdeOrbit::OdeOrbit(double amplitude, Parity parity)
    : OdeOrbit(amplitude, parity, modulus_frequency(amplitude, parity)) {}

OdeOrbit::OdeOrbit(double amplitude, Parity parity, ModulusFrequency mw)
    : amplitude_(amplitude),
      parity_(parity),
      omega_(mw.omega),
      jacobi_(EllipticModulus(mw.m)),
      period_(4.0 * jacobi_.quarter_period() / omega_),
      energy_(dduffing::energy(amplitude, 0.0, parity)) {}

PhasePoint OdeOrbit::state(double t) const {
    const auto [cn, sn, dn] = jacobi_(omega_ * t);
    return {amplitude_ * cn, -amplitude_ * omega_ * sn * dn};
}

OrbitSpec OrbitSpec::candidate(int n, double delay, double amplitude) {
    if (n < 1)
        throw DomainError("lift index n must be >= 1");
    if (!(delay > 0.0) || !std::isfinite(delay))
        throw DomainError("delay T must be positive and finite");
    OdeOrbit orbit(amplitude, parity_of(n));
    if (!(orbit.energy() > 0.0))
        throw DomainError(describe(amplitude, parity_of(n)) + ": energy must be positive");
    return OrbitSpec(n, delay, orbit);
}

OrbitSpec OrbitSpec::lifted(int n, double delay, double amplitude) {
    OrbitSpec spec = candidate(n, delay, amplitude);
    const double target = 2.0 * delay / n;
    if (std::abs(spec.period() - target) > kLiftTolerance * target) {
        std::ostringstream os;
        os.precision(17);
        os << describe(amplitude, spec.parity()) << " has minimal period " << spec.period()
           << ", not 2T/n = " << target;
        throw DomainError(os.str());
    }
    return spec;
}

PhasePoint exact_solution(const OdeOrbit& orbit, double t) { return orbit.state(t); }

PhasePoint exact_solution(const OrbitSpec& orbit, double t) { return orbit.ode().state(t); }

LiftResidual lift_residual(const OrbitSpec& orbit, int sample_count) {
    if (sample_count < 2)
        throw ConfigError("lift_residual needs at least 2 samples");
    const double delay = orbit.delay();
    const double s = sign_of(orbit.parity());
    LiftResidual out{0.0, 0.0};
    for (int i = 0; i < sample_count; ++i) {
        const double t = 2.0 * delay * i / (sample_count - 1);
        const double x = orbit.ode().state(t).x;
        const double delayed = orbit.ode().state(t - delay).x;
        const double x3 = x * x * x;
        const double xddot = -s * x - x3;
        out.dde = std::max(out.dde, std::abs(xddot + delayed + x3));
        out.shift = std::max(out.shift, std::abs(delayed - s * x));
    }
    return out;
}

}  // namespace dduffing
