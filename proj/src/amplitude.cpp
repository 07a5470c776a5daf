#include "dduffing/amplitude.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dduffing/errors.hpp"

namespace dduffing {

namespace {

// p(A) in powers of 1/A. Each coefficient is r + q pi^2 / gamma^2.
constexpr std::array<SeriesMonomial, 11> kPeriodSeries{{
    {1, 1, 1, 0, 0, +1, +1},
    {3, 1, 2, 0, 0, -1, +1},
    {3, 4, 1, -2, 2, -1, +1},
    {5, 1, 2, 0, 0, +1, +1},
    {5, 6, 1, -2, 2, +1, +1},
    {7, 5, 8, 0, 0, -1, +1},
    {7, 9, 1, -2, 2, -1, +1},
    {9, 85, 96, 0, 0, +1, +1},
    {9, 14, 1, -2, 2, +1, +1},
    {11, 87, 64, 0, 0, -1, +1},
    {11, 903, 40, -2, 2, -1, +1},
}};

// A(p) in powers of p, coefficients expanded into gamma^a pi^b monomials:
//   p^1:  pi (gamma^2/2 + 4 pi^2) gamma^-4
//   p^3:  2 pi^4 (gamma^2 + 16 pi^2) gamma^-8
//   p^5:  8 pi^7 (3 gamma^2 + 56 pi^2) gamma^-12
//   p^7:  pi^4 (gamma^8 - 36864 gamma^2 pi^6 - 737280 pi^8) gamma^-16 / 96
//   p^9:  pi^5 (5 gamma^10 + 328 gamma^8 pi^2 - 6758400 gamma^2 pi^8
//               - 140574720 pi^10) gamma^-20 / 960
constexpr std::array<SeriesMonomial, 14> kAmplitudeSeries{{
    {-1, 1, 1, 0, 0, +1, +1},
    {1, 1, 2, -2, 1, -1, +1},
    {1, 4, 1, -4, 3, -1, +1},
    {3, 2, 1, -6, 4, -1, -1},
    {3, 32, 1, -8, 6, -1, -1},
    {5, 24, 1, -10, 7, -1, +1},
    {5, 448, 1, -12, 9, -1, +1},
    {7, 1, 96, -8, 4, +1, +1},
    {7, -384, 1, -14, 10, +1, +1},
    {7, -7680, 1, -16, 12, +1, +1},
    {9, 1, 192, -10, 5, +1, -1},
    {9, 41, 120, -12, 7, +1, -1},
    {9, -7040, 1, -18, 13, +1, -1},
    {9, -146432, 1, -20, 15, +1, -1},
}};

constexpr double kResidualTolerance = 1e-12;
constexpr double kBoundaryAmplitude = 1e-8;
constexpr int kMaxNewton = 100;
constexpr int kMaxBracketing = 2000;

double odd_floor() { return std::numbers::sqrt2 + 2e-12; }

}  // namespace

std::span<const SeriesMonomial> period_series_table() noexcept { return kPeriodSeries; }

std::span<const SeriesMonomial> amplitude_series_table() noexcept { return kAmplitudeSeries; }

namespace detail {

void check_period_order(SeriesOrder order) {
    const int k = order.max_power;
    if (k < 1 || k > 11 || k % 2 == 0)
        throw ConfigError("p(A) series order must be one of 1, 3, 5, 7, 9, 11");
}

void check_amplitude_order(SeriesOrder order) {
    const int k = order.max_power;
    if (k < -1 || k > 9 || (k + 1) % 2 != 0)
        throw ConfigError("A(p) series order must be one of -1, 1, 3, 5, 7, 9");
}

}  // namespace detail

double series_period_of_amplitude(double amplitude, Parity parity, SeriesOrder order) {
    if (!(amplitude > 0.0))
        throw DomainError("series p(A) needs A > 0");
    return series_period_of_amplitude<double>(amplitude, parity, order, gamma_quarter_squared(),
                                              std::numbers::pi);
}

double series_amplitude_of_period(double period, Parity parity, SeriesOrder order) {
    if (!(period > 0.0))
        throw DomainError("series A(p) needs p > 0");
    return series_amplitude_of_period<double>(period, parity, order, gamma_quarter_squared(),
                                              std::numbers::pi);
}

OrbitSpec solve_amplitude(double delay, int n) {
    if (!(delay > 0.0) || !std::isfinite(delay))
        throw DomainError("delay T must be positive and finite");
    if (n < 1)
        throw DomainError("lift index n must be >= 1");

    const Parity parity = parity_of(n);
    const double target = 2.0 * delay / n;
    if (parity == Parity::even && target >= 2.0 * std::numbers::pi) {
        std::ostringstream os;
        os.precision(17);
        os << "no lifted orbit for even n = " << n << ", T = " << delay << ": 2T/n = " << target
           << " >= 2 pi";
        throw NoSolutionError(os.str());
    }

    // f is strictly decreasing in A.
    const auto f = [&](double a) { return minimal_period(a, parity) - target; };

    // Lowest admissible amplitude: 0 (even) or just outside the separatrix (odd).
    const double floor = parity == Parity::odd ? odd_floor() : 0.0;
    const double lead = gamma_quarter_squared() / std::sqrt(std::numbers::pi) / target;
    double lo = std::max(0.5 * lead, floor);
    double hi = std::max(2.0 * lead, 2.0 * lo);

    for (int i = 0; f(lo) < 0.0; ++i) {
        if (i == kMaxBracketing || lo == floor)
            throw NoSolutionError("2T/n exceeds the period of every admissible orbit "
                                  "(amplitude would lie within 1e-12 of the separatrix)");
        hi = lo;
        lo = floor + 0.5 * (lo - floor);
        if (parity == Parity::odd && lo - floor < 1e-15)
            lo = floor;
    }
    for (int i = 0; f(hi) > 0.0; ++i) {
        if (i == kMaxBracketing)
            throw NoSolutionError("could not bracket the amplitude from above");
        lo = hi;
        hi *= 2.0;
    }

    double a = series_amplitude_of_period(target, parity, SeriesOrder{9});
    if (!(a > lo && a < hi))
        a = 0.5 * (lo + hi);

    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
        const double fa = f(a);
        if (fa == 0.0) {
            converged = true;
            break;
        }
        (fa > 0.0 ? lo : hi) = a;
        if (std::abs(fa) <= 1e-15 * target || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * a) {
            converged = true;
            break;
        }

        double h = 1e-7 * a;
        if (a - h <= floor)
            h = 0.5 * (a - floor);
        const double slope = (f(a + h) - f(a - h)) / (2.0 * h);
        double next = a - fa / slope;
        if (!(slope < 0.0) || !(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        a = next;
    }

    const double residual = std::abs(f(a)) / target;
    if (!converged && residual > kResidualTolerance)
        throw NumericalError("amplitude iteration did not converge");
    if (residual > kResidualTolerance) {
        // Odd orbits with long periods sit next to the separatrix, where p
        // grows like -log(A - sqrt 2) and one ulp of A moves p by more than
        // the tolerance (2T/n beyond roughly 24).
        std::ostringstream os;
        os << "amplitude residual " << residual << " above tolerance 1e-12";
        if (parity == Parity::odd && a - std::numbers::sqrt2 < 1e-3)
            os << ": ill-conditioned, A - sqrt(2) = " << a - std::numbers::sqrt2
               << " (period too long to resolve in double precision)";
        throw NumericalError(os.str());
    }

    OrbitSpec spec = OrbitSpec::lifted(n, delay, a);
    spec.set_boundary_warning(parity == Parity::even && a < kBoundaryAmplitude);
    return spec;
}

bool shared_amplitude(double delay, int n, double delay2, int n2) {
    if (!(delay > 0.0) || !(delay2 > 0.0) || n < 1 || n2 < 1)
        throw DomainError("shared_amplitude needs positive delays and n >= 1");
    if (parity_of(n) != parity_of(n2))
        return false;
    const double r1 = delay / n;
    const double r2 = delay2 / n2;
    return std::abs(r1 - r2) <= 1e-12 * std::max(r1, r2);
}

}  // namespace dduffing
