#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library: integrals are done by Boost quadrature, and the multiprecision
// elliptic integral comes from Boost.Math.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using boost::math::quadrature::gauss_kronrod;

// K(m) from its defining integral.
inline double elliptic_k(double m) {
    auto f = [m](double th) {
        const double s = std::sin(th);
        return 1.0 / std::sqrt(1.0 - m * s * s);
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 20, 1e-15);
}

// Gamma(1/4) = 4 * int_0^inf exp(-s^4) ds  (t = s^4 in the Gamma integral).
inline double gamma_quarter() {
    boost::math::quadrature::exp_sinh<double> integrator;
    return 4.0 * integrator.integrate([](double s) { return std::exp(-s * s * s * s); }, 1e-15);
}

// Period of x'' + s x + x^3 = 0 through (A, 0) from energy conservation,
//   p = 4 int_0^A dx / sqrt(2 (H - V(x))),
// with x = A sin(theta), which removes the endpoint singularity:
//   p = 4 int_0^{pi/2} dtheta / sqrt(s + A^2 (1 + sin^2 theta) / 2).
inline double period(double amplitude, int s) {
    auto f = [=](double th) {
        const double st = std::sin(th);
        return 1.0 / std::sqrt(s + amplitude * amplitude * (1.0 + st * st) / 2.0);
    };
    return 4.0 * gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 20, 1e-15);
}

using Real50 = boost::multiprecision::cpp_bin_float_50;

// Exact minimal period 4 K(m) / omega in 50 digits.
inline Real50 period50(const Real50& amplitude, int s) {
    const Real50 a2 = amplitude * amplitude;
    const Real50 m = a2 / (2 * (a2 + s));
    const Real50 omega = sqrt(a2 + s);
    return 4 * boost::math::ellint_1(sqrt(m)) / omega;
}

inline Real50 gamma_quarter_squared50() {
    const Real50 g = boost::math::tgamma(Real50(1) / 4);
    return g * g;
}

inline Real50 pi50() { return boost::math::constants::pi<Real50>(); }

// Minimizes the (x, xdot) distance to an orbit given as a callable of t by
// brute force on a dense grid. Used to cross-check the golden-section search.
template <class Orbit>
double dense_distance(double x, double xdot, const Orbit& orbit, double period, int points) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const auto [ox, ov] = orbit(period * i / points);
        best = std::min(best, std::hypot(x - ox, xdot - ov));
    }
    return best;
}

}  // namespace oracle
