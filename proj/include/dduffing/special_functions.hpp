#pragma once

// Complete elliptic integral K(m) and the Jacobi functions cn, sn, dn.
// All routines take the parameter m (not the modulus k = sqrt(m)) and
// accept 0 <= m < 1 only.

namespace dduffing {

/// Elliptic parameter m with 0 <= m < 1. Construction throws DomainError
/// for anything else, including the separatrix value m = 1.
class EllipticModulus {
public:
    explicit EllipticModulus(double m);

    double value() const noexcept { return m_; }

private:
    double m_;
};

struct JacobiTriple {
    double cn;
    double sn;
    double dn;
};

/// K(m) by the arithmetic-geometric mean, K = pi / (2 agm(1, sqrt(1 - m))).
double elliptic_k(EllipticModulus m);
double elliptic_k(double m);

/// cn, sn, dn at real argument u. The argument is first reduced modulo the
/// real period 4K(m) and reflected into [0, K(m)], then evaluated with the
/// descending Landen transformation.
JacobiTriple jacobi_cn_sn_dn(double u, EllipticModulus m);
JacobiTriple jacobi_cn_sn_dn(double u, double m);

/// Gamma(1/4)^2.
constexpr double gamma_quarter_squared() noexcept { return 13.145047206596874412856136719588638; }

}  // namespace dduffing

#include <array>
#include <cstddef>

namespace dduffing {

/// Jacobi functions for one fixed parameter. The AGM sequence is computed
/// once at construction, so repeated evaluation at many arguments (orbit
/// sampling, DDE history) skips it.
class JacobiElliptic {
public:
    explicit JacobiElliptic(EllipticModulus m);

    double parameter() const noexcept { return m_; }
    double quarter_period() const noexcept { return k_; }

    JacobiTriple operator()(double u) const;

private:
    static constexpr std::size_t kMaxLevels = 16;

    double m_;
    double k_;
    std::size_t levels_ = 0;
    std::array<double, kMaxLevels + 1> a_{};
    std::array<double, kMaxLevels + 1> c_{};
};

}  // namespace dduffing
