#pragma once

// Amplitudes A_n of the lifted orbits: the root of 4 K(m(A)) / omega(A) = 2T/n,
// plus the convergent expansions of p(A) about A = infinity and of the
// inverse A(p) about p = 0.

#include <cmath>
#include <span>
#include <vector>

#include "dduffing/duffing.hpp"

namespace dduffing {

/// Highest retained power of the expansion variable. The period series
/// p(A) accepts 1, 3, ..., 11 (powers of 1/A); the inverse series A(p)
/// accepts -1, 1, ..., 9 (powers of p).
struct SeriesOrder {
    int max_power;
};

/// One monomial  (num / den) * gamma^gamma_power * pi^pi_power  of a series
/// coefficient, gamma = Gamma(1/4)^2. Each series is
///
///     (gamma / sqrt(pi)) * sum_k  c_k * z^k,   c_k = sum of its monomials,
///
/// with z = 1/A for p(A) (k = 1, 3, ..., 11) and z = p for A(p)
/// (k = -1, 1, ..., 9). `even_sign` and `odd_sign` give the sign of the whole
/// coefficient in each parity.
struct SeriesMonomial {
    int power;
    long long num;
    long long den;
    int gamma_power;
    int pi_power;
    int even_sign;
    int odd_sign;
};

std::span<const SeriesMonomial> period_series_table() noexcept;
std::span<const SeriesMonomial> amplitude_series_table() noexcept;

namespace detail {

void check_period_order(SeriesOrder order);
void check_amplitude_order(SeriesOrder order);

template <class Real>
Real evaluate_series(std::span<const SeriesMonomial> table, const Real& z, Parity parity,
                     int max_power, const Real& gamma, const Real& pi) {
    using std::pow;
    using std::sqrt;
    Real sum = 0;
    for (const auto& t : table) {
        if (t.power > max_power)
            continue;
        Real c = Real(t.num) / Real(t.den);
        if (t.gamma_power != 0)
            c *= pow(gamma, t.gamma_power);
        if (t.pi_power != 0)
            c *= pow(pi, t.pi_power);
        const int sign = parity == Parity::even ? t.even_sign : t.odd_sign;
        sum += sign * c * pow(z, t.power);
    }
    return gamma / sqrt(pi) * sum;
}

}  // namespace detail

/// Truncated p(A), with error O(A^-(max_power + 2)).
template <class Real>
Real series_period_of_amplitude(Real amplitude, Parity parity, SeriesOrder order, const Real& gamma,
                                const Real& pi) {
    detail::check_period_order(order);
    const Real z = Real(1) / amplitude;
    return detail::evaluate_series(period_series_table(), z, parity, order.max_power, gamma, pi);
}

/// Truncated A(p), with error O(p^(max_power + 2)).
template <class Real>
Real series_amplitude_of_period(Real period, Parity parity, SeriesOrder order, const Real& gamma,
                                const Real& pi) {
    detail::check_amplitude_order(order);
    return detail::evaluate_series(amplitude_series_table(), period, parity, order.max_power, gamma,
                                   pi);
}

/// Double-precision p(A). Intended for A >= 2.
double series_period_of_amplitude(double amplitude, Parity parity, SeriesOrder order = {11});

/// Double-precision A(p). Intended for p <= 1.
double series_amplitude_of_period(double period, Parity parity, SeriesOrder order = {9});

/// Amplitude of the lifted orbit x_n for delay T, to |4K/omega - 2T/n| <=
/// 1e-12 (2T/n). Safeguarded Newton seeded by the inverse series, with
/// bisection inside a monotone bracket. Throws NoSolutionError for even n
/// with 2T/n >= 2 pi.
OrbitSpec solve_amplitude(double delay, int n);

/// True iff T/n == T2/n2 to 1e-12 relative and n, n2 share parity; such
/// pairs have the same A.
bool shared_amplitude(double delay, int n, double delay2, int n2);

}  // namespace dduffing
