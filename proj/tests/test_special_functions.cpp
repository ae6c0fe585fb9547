#include "doctest.h"

#include "tomobell/errors.hpp"
#include "tomobell/special_functions.hpp"

#include <cmath>
#include <vector>

using namespace tomobell;

namespace {

long double factorial(int n)
{
    long double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)
long double hermite_explicit(int n, long double x)
{
    long double sum = 0;
    for (int m = 0; 2 * m <= n; ++m)
        sum += (m % 2 ? -1.0L : 1.0L) * std::pow(2 * x, n - 2 * m) / (factorial(m) * factorial(n - 2 * m));
    return factorial(n) * sum;
}

// L_n^a(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!
long double laguerre_explicit(int n, int a, long double x)
{
    long double sum = 0;
    for (int k = 0; k <= n; ++k) {
        const long double binom = factorial(n + a) / (factorial(n - k) * factorial(a + k));
        sum += (k % 2 ? -1.0L : 1.0L) * binom * std::pow(x, k) / factorial(k);
    }
    return sum;
}

// Periodic trapezoid of an analytic integrand converges geometrically.
double trapezoid_0_pi(double (*f)(double, double), double x, int n)
{
    double s = 0.5 * (f(x, 0.0) + f(x, kPi));
    for (int k = 1; k < n; ++k) s += f(x, kPi * k / n);
    return s * kPi / n;
}

double i0_integrand(double x, double t) { return std::exp(x * std::cos(t)); }
double j0_integrand(double x, double t) { return std::cos(x * std::sin(t)); }

// erf(z) = (2/sqrt(pi)) int_0^1 z exp(-z^2 t^2) dt by composite Simpson on a fine grid.
cd erf_path_integral(cd z)
{
    const int n = 20000;
    cd s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * std::exp(-z * z * t * t);
    }
    return 2.0 / kSqrtPi * z * s / (3.0 * n);
}

} // namespace

TEST_CASE("hermite matches the explicit coefficient sum")
{
    for (int n = 0; n <= 14; ++n)
        for (double x : {-2.3, -0.7, 0.0, 0.4, 1.9}) {
            const double ref = static_cast<double>(hermite_explicit(n, x));
            CHECK(hermite(n, x) == doctest::Approx(ref).epsilon(1e-12));
        }
    CHECK(hermite(1, 0.0) == 0.0);
    CHECK(hermite(2, 0.0) == -2.0);
}

TEST_CASE("polynomial order guard")
{
    CHECK_THROWS_AS(hermite(-1, 0.5), DomainError);
    CHECK_THROWS_AS(hermite(kMaxPolynomialOrder + 1, 0.5), DomainError);
    CHECK_THROWS_AS(laguerre(kMaxPolynomialOrder + 1, 0.5), DomainError);
    CHECK_THROWS_AS(laguerre(3, -1, 0.5), DomainError);
    CHECK_NOTHROW(hermite(kMaxPolynomialOrder, 0.1));
}

TEST_CASE("laguerre matches the explicit binomial sum")
{
    for (int n = 0; n <= 10; ++n)
        for (int a = 0; a <= 4; ++a)
            for (double x : {0.0, 0.3, 1.7, 4.2}) {
                CHECK(laguerre(n, a, x) == doctest::Approx(static_cast<double>(laguerre_explicit(n, a, x))).epsilon(1e-11));
            }
    CHECK(laguerre(3, 0.8) == laguerre(3, 0, 0.8));
}

TEST_CASE("normalized hermite values and Cramer bound")
{
    std::vector<double> h(21);
    for (double x : {-1.5, 0.3, 2.2}) {
        normalized_hermite(x, h);
        for (int n = 0; n <= 20; ++n) {
            const double ref = static_cast<double>(hermite_explicit(n, x) / std::sqrt(std::pow(2.0L, n) * factorial(n)));
            CHECK(h[n] == doctest::Approx(ref).epsilon(1e-11));
        }
    }
    std::vector<double> big(600);
    for (double x = -9.0; x <= 9.0; x += 0.37) {
        normalized_hermite(x, big);
        for (double v : big) CHECK(std::fabs(v) <= 1.0865 * std::exp(0.5 * x * x));
    }
}

TEST_CASE("hermite functions are orthonormal")
{
    const int nmax = 12;
    const double h = 0.01;
    std::vector<double> psi(nmax);
    std::vector<std::vector<double>> gram(nmax, std::vector<double>(nmax, 0.0));
    for (double x = -12.0; x <= 12.0; x += h) {
        hermite_functions(x, psi);
        for (int m = 0; m < nmax; ++m)
            for (int n = 0; n < nmax; ++n) gram[m][n] += h * psi[m] * psi[n];
    }
    for (int m = 0; m < nmax; ++m)
        for (int n = 0; n < nmax; ++n) CHECK(gram[m][n] == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("bessel I0 against its integral representation")
{
    // 2 r^2 at the pair-coherent reference amplitude r = 1.05
    for (double x : {0.0, 0.5, 2.205, 7.0, 29.9, 30.1, 45.0}) {
        const double ref = trapezoid_0_pi(i0_integrand, x, 400) / kPi;
        CHECK(bessel_i0(x) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(bessel_i0(-2.0) == bessel_i0(2.0));
    CHECK_THROWS_AS(bessel_i0(NAN), DomainError);
}

TEST_CASE("bessel I0 against a long double power series")
{
    long double term = 1, sum = 1;
    const long double q = 0.25L * 2.205L * 2.205L;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
    }
    CHECK(bessel_i0(2.205) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-14));
}

TEST_CASE("bessel J0 against its integral representation")
{
    for (double x : {0.0, 1e-9, 0.1, 2.205, 2.404825557695773, 10.0, 50.0}) {
        const double ref = trapezoid_0_pi(j0_integrand, x, 400) / kPi;
        CHECK(bessel_j0(x) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
    CHECK(std::fabs(bessel_j0(2.404825557695773)) < 1e-13);
}

TEST_CASE("complex erf against a path integral")
{
    for (cd z : {cd(1.0, 1.0), cd(0.5, -2.0), cd(-3.0, 0.5), cd(2.0, 3.0), cd(0.05, 0.02), cd(0.0, 1.5), cd(4.0, -1.0)}) {
        const cd ref = erf_path_integral(z);
        CHECK(std::abs(erf_complex(z) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("complex erf on the axes and symmetries")
{
    for (double x : {-3.0, -0.2, 0.0, 0.7, 5.5, 11.9}) CHECK(erf_complex(cd(x, 0.0)).real() == doctest::Approx(std::erf(x)).epsilon(1e-15));
    // erf(iy) = i (2/sqrt(pi)) int_0^y e^{t^2} dt
    {
        const double y = 1.3;
        const int n = 20000;
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double t = y * k / n;
            s += ((k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0)) * std::exp(t * t);
        }
        const double ref = 2.0 / kSqrtPi * s * y / (3.0 * n);
        const cd v = erf_complex(cd(0.0, y));
        CHECK(v.real() == 0.0);
        CHECK(v.imag() == doctest::Approx(ref).epsilon(1e-12));
    }
    const cd z(0.8, -1.7);
    CHECK(std::abs(erf_complex(std::conj(z)) - std::conj(erf_complex(z))) < 1e-15);
    CHECK(std::abs(erf_complex(-z) + erf_complex(z)) < 1e-15);
    CHECK(erf_complex(cd(0.0, 0.0)) == cd(0.0, 0.0));
}

TEST_CASE("complex erf rejects arguments outside the validated box")
{
    CHECK_THROWS_AS(erf_complex(cd(13.0, 0.0)), DomainError);
    CHECK_THROWS_AS(erf_complex(cd(0.0, -12.5)), DomainError);
    CHECK_THROWS_AS(erf_complex(cd(NAN, 0.0)), DomainError);
}
