#pragma once

#include <complex>
#include <span>

namespace tomobell {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2 = 1.41421356237309504880;

/// Highest polynomial order accepted by hermite() and laguerre().
inline constexpr int kMaxPolynomialOrder = 200;

/// erf_complex() is validated for |Re z| <= kErfValidatedRange and |Im z| <= kErfValidatedRange.
inline constexpr double kErfValidatedRange = 12.0;

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
/// Throws DomainError for n < 0 or n > kMaxPolynomialOrder.
double hermite(int n, double x);

/// Laguerre polynomial L_n(x).
double laguerre(int n, double x);

/// Associated Laguerre polynomial L_n^{(alpha)}(x), alpha >= 0.
double laguerre(int n, int alpha, double x);

/// h_n(x) = H_n(x) / sqrt(2^n n!) for n = 0..out.size()-1, by the normalized recurrence.
/// Bounded by 1.0865 e^{x^2/2} for every n (Cramer), so there is no order guard.
void normalized_hermite(double x, std::span<double> out);

/// Normalized oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}.
///
/// Evaluated by the normalized recurrence, so it neither overflows nor
/// needs the n <= kMaxPolynomialOrder guard.  Fills out[0..out.size()).
void hermite_functions(double x, std::span<double> out);

/// Modified Bessel function I_0(x).
double bessel_i0(double x);

/// Bessel function of the first kind J_0(x).
double bessel_j0(double x);

/// Error function of a complex argument.
///
/// Uses the Abramowitz-Stegun 7.1.29 series on the first quadrant and
/// the reflection symmetries erf(-z) = -erf(z), erf(conj z) = conj erf(z).
/// Relative accuracy is ~1e-15 inside the validated box; outside it a
/// DomainError is thrown.
cd erf_complex(cd z);

} // namespace tomobell
