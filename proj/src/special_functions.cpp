#include "dduffing/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dduffing/errors.hpp"

namespace dduffing {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

EllipticModulus::EllipticModulus(double m) : m_(m) {
    if (!(m >= 0.0 && m < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        if (m == 1.0)
            os << "elliptic parameter m = 1 is the separatrix limit, K(m) diverges";
        else
            os << "elliptic parameter m = " << m << " outside [0, 1)";
        throw DomainError(os.str());
    }
}

double elliptic_k(EllipticModulus m) {
    double a = 1.0;
    double b = std::sqrt(1.0 - m.value());
    for (int i = 0; i < 64 && std::abs(a - b) > 2.0 * kEps * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

double elliptic_k(double m) { return elliptic_k(EllipticModulus(m)); }

JacobiElliptic::JacobiElliptic(EllipticModulus m) : m_(m.value()) {
    double a = 1.0;
    double b = std::sqrt(1.0 - m_);
    double c = std::sqrt(m_);
    a_[0] = a;
    c_[0] = c;
    std::size_t n = 0;
    while (c > kEps * a && n < kMaxLevels) {
        const double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        ++n;
        a_[n] = a;
        c_[n] = c;
    }
    levels_ = n;
    k_ = std::numbers::pi / (2.0 * a);
}

JacobiTriple JacobiElliptic::operator()(double u) const {
    // Reduce to [0, K]: cn is even, sn odd, dn even in u; all 4K-periodic;
    // and on [K, 2K] sn(2K - u) = sn(u), cn(2K - u) = -cn(u), dn(2K - u) = dn(u).
    const double period = 4.0 * k_;
    double r = std::fmod(u, period);
    if (r > 2.0 * k_)
        r -= period;
    else if (r < -2.0 * k_)
        r += period;
    double sn_sign = 1.0;
    if (r < 0.0) {
        r = -r;
        sn_sign = -1.0;
    }
    double cn_sign = 1.0;
    if (r > k_) {
        r = 2.0 * k_ - r;
        cn_sign = -1.0;
    }

    double phi = std::ldexp(a_[levels_] * r, static_cast<int>(levels_));
    for (std::size_t n = levels_; n > 0; --n)
        phi = 0.5 * (phi + std::asin(c_[n] / a_[n] * std::sin(phi)));

    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(1.0 - m_ * sn * sn);
    return {cn_sign * cn, sn_sign * sn, dn};
}

JacobiTriple jacobi_cn_sn_dn(double u, EllipticModulus m) { return JacobiElliptic(m)(u); }

JacobiTriple jacobi_cn_sn_dn(double u, double m) { return jacobi_cn_sn_dn(u, EllipticModulus(m)); }

}  // namespace dduffing
