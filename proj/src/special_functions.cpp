#include "tomobell/special_functions.hpp"

#include "tomobell/errors.hpp"

#include <cmath>
#include <string>

namespace tomobell {

namespace {

void check_order(int n, const char* who)
{
    if (n < 0 || n > kMaxPolynomialOrder) {
        throw DomainError(std::string(who) + ": order " + std::to_string(n) +
                          " outside [0, " + std::to_string(kMaxPolynomialOrder) + "]");
    }
}

} // namespace

double hermite(int n, double x)
{
    check_order(n, "hermite");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double laguerre(int n, double x)
{
    return laguerre(n, 0, x);
}

double laguerre(int n, int alpha, double x)
{
    check_order(n, "laguerre");
    if (alpha < 0) throw DomainError("laguerre: negative alpha");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void normalized_hermite(double x, std::span<double> out)
{
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = kSqrt2 * x;
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        const double k = static_cast<double>(n);
        out[n + 1] = std::sqrt(2.0 / (k + 1.0)) * x * out[n] - std::sqrt(k / (k + 1.0)) * out[n - 1];
    }
}

void hermite_functions(double x, std::span<double> out)
{
    normalized_hermite(x, out);
    const double gauss = std::exp(-0.5 * x * x) / std::sqrt(kSqrtPi);
    for (double& v : out) v *= gauss;
}

double bessel_i0(double x)
{
    if (!std::isfinite(x)) throw DomainError("bessel_i0: non-finite argument");
    const double ax = std::fabs(x);
    if (ax <= 30.0) {
        // Positive-term series, no cancellation.
        const double q = 0.25 * ax * ax;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    // Asymptotic expansion e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k).
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd / (k * 8.0 * ax);
        if (next > term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(ax) / std::sqrt(2.0 * kPi * ax) * sum;
}

double bessel_j0(double x)
{
    if (!std::isfinite(x)) throw DomainError("bessel_j0: non-finite argument");
    const double ax = std::fabs(x);
    if (ax < 1e-8) return 1.0 - 0.25 * ax * ax;
    // Miller backward recurrence normalized by J_0 + 2 sum_k J_{2k} = 1.
    int start = static_cast<int>(ax + 30.0 + std::sqrt(60.0 * ax));
    start += start % 2;
    double jp1 = 0.0;
    double j = 1e-300;
    double norm = 0.0;
    double j0 = 0.0;
    for (int k = start; k > 0; --k) {
        const double jm1 = 2.0 * k / ax * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::fabs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
        if (k - 1 == 0) j0 = j;
    }
    norm += j0;
    return j0 / norm;
}

cd erf_complex(cd z)
{
    if (!(std::fabs(z.real()) <= kErfValidatedRange && std::fabs(z.imag()) <= kErfValidatedRange)) {
        throw DomainError("erf_complex: argument outside the validated range |Re z|, |Im z| <= 12");
    }
    const double sx = z.real() < 0 ? -1.0 : 1.0;
    const double sy = z.imag() < 0 ? -1.0 : 1.0;
    const double x = std::fabs(z.real());
    const double y = std::fabs(z.imag());

    const double ex = std::exp(-x * x);
    double re = std::erf(x);
    double im = 0.0;
    if (x == 0.0) {
        im += y / kPi;
    } else {
        const double sxy = std::sin(x * y);
        re += ex / (2.0 * kPi * x) * 2.0 * sxy * sxy;
        im += ex / (2.0 * kPi * x) * std::sin(2.0 * x * y);
    }

    const double c2 = std::cos(2.0 * x * y);
    const double s2 = std::sin(2.0 * x * y);
    const int terms = static_cast<int>(2.0 * y) + 15;
    double sum_re = 0.0;
    double sum_im = 0.0;
    const double ey = std::exp(y);
    double eny = 1.0;
    for (int n = 1; n <= terms; ++n) {
        eny *= ey;
        const double ch = 0.5 * (eny + 1.0 / eny);
        const double sh = 0.5 * (eny - 1.0 / eny);
        const double weight = std::exp(-0.25 * n * n) / (n * n + 4.0 * x * x);
        sum_re += weight * (2.0 * x - 2.0 * x * ch * c2 + n * sh * s2);
        sum_im += weight * (2.0 * x * ch * s2 + n * sh * c2);
    }
    re += 2.0 / kPi * ex * sum_re;
    im += 2.0 / kPi * ex * sum_im;
    return {sx * re, sy * im};
}

} // namespace tomobell
