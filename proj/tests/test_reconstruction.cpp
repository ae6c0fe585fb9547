#include "doctest.h"

#include "tomobell/errors.hpp"
#include "tomobell/quadrature.hpp"
#include "tomobell/reconstruction.hpp"
#include "tomobell/states.hpp"
#include "tomobell/tomography.hpp"

#include <cmath>

using namespace tomobell;

namespace {

std::vector<double> grid(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

TEST_CASE("inverse Fourier recovers the vacuum Wigner function")
{
    auto vac = [](double x, double) { return std::sqrt(2 / kPi) * std::exp(-2 * x * x); };
    const auto samples = TomogramSamples::sample(vac, 8.0, 321, 48);
    const auto q = grid(-3, 3, 61);
    const auto g = inverse_fourier_wigner(samples, q, q);
    CHECK(g.values(30, 30) == doctest::Approx(2 / kPi).epsilon(0.01));
    CHECK(g.values(40, 25) == doctest::Approx(2 / kPi * std::exp(-2 * (1.0 + 0.25))).epsilon(0.02));
    CHECK(g.integral == doctest::Approx(1.0).epsilon(0.01));
    CHECK(g.max_imag_residue < 1e-8);
}

TEST_CASE("inverse Fourier on the reduced squeezed vacuum")
{
    // Mode-1 marginal of the two-mode tomogram, integrated over X2.
    const double s = 0.3;
    const auto st = TwoModeState::squeezed_vacuum_from_s(s);
    const auto rule = gauss_legendre(64, -6.0, 6.0);
    auto marginal = [&](double x, double theta) {
        return rule.integrate([&](double x2) { return tomogram_closed_form(st, x, theta, x2, 0.0); });
    };
    const auto samples = TomogramSamples::sample(marginal, 8.0, 321, 32);
    const auto q = grid(-3, 3, 31);
    const auto g = inverse_fourier_wigner(samples, q, q);

    // Partial-trace oracle: W(0,0) = (pi hbar)^{-1} sum_n (-1)^n rho_nn with hbar = 1/2.
    const DensityMatrix r = reduce_to_mode1(density_matrix(st, 60));
    double parity = 0.0;
    for (int n = 0; n < 60; ++n) parity += (n % 2 ? -1.0 : 1.0) * r.entry(n, n).real();
    CHECK(g.values(15, 15) == doctest::Approx(2 / kPi * parity).epsilon(0.01));
    CHECK(2 / kPi * parity == doctest::Approx(2 / kPi / std::cosh(2 * s)).epsilon(1e-12));
    CHECK(g.max_imag_residue < 1e-8);
}

TEST_CASE("inverse Fourier input validation")
{
    auto vac = [](double x, double) { return std::exp(-x * x) / kSqrtPi; };
    const auto samples = TomogramSamples::sample(vac, 8.0, 321, 16);
    CHECK_THROWS_AS(inverse_fourier_wigner(samples, {0.0}, {0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(inverse_fourier_wigner(samples, {0.0, 0.1, 0.5}, {0.0, 1.0}), ConfigError);
    // a grid that misses most of the state cannot integrate to one
    CHECK_THROWS_AS(inverse_fourier_wigner(samples, grid(0, 0.5, 3), grid(0, 0.5, 3)), AccuracyError);
    FourierInversionConfig fast;
    fast.k_max = 100.0;
    CHECK_THROWS_AS(inverse_fourier_wigner(samples, grid(-3, 3, 7), grid(-3, 3, 7), fast), ConfigError);
}

TEST_CASE("displacement matrix elements")
{
    const cd beta(0.4, -0.7);
    const auto d = displacement_matrix(beta, 6);
    const double g = std::exp(-0.5 * std::norm(beta));
    for (int m = 0; m < 6; ++m) {
        // D(beta)|0> is the coherent state |beta>
        CHECK(std::abs(d[m * 6 + 0] - g * std::pow(beta, m) / std::sqrt(factorial(m))) < 1e-14);
        // <0|D(beta) = <-beta|
        CHECK(std::abs(d[0 * 6 + m] - g * std::pow(-std::conj(beta), m) / std::sqrt(factorial(m))) < 1e-14);
    }
    // D(beta)^dagger = D(-beta)
    const auto dm = displacement_matrix(-beta, 6);
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n) CHECK(std::abs(dm[m * 6 + n] - std::conj(d[n * 6 + m])) < 1e-14);
}

TEST_CASE("kernel reconstruction of the vacuum")
{
    const auto r = kernel_reconstruct_density([](double x, double) { return std::exp(-x * x) / kSqrtPi; }, 6);
    CHECK(r.rho.entry(0, 0).real() == doctest::Approx(1.0).epsilon(0.02));
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n)
            if (m != n) CHECK(std::abs(r.rho.entry(m, n)) < 2e-2);
    CHECK(r.rho.hermiticity_error() < 1e-6);
    CHECK(r.rho.normalization_error() < 1e-12);
}

TEST_CASE("kernel reconstruction of a single photon")
{
    const auto r = kernel_reconstruct_density([](double x, double) { return 2 / kSqrtPi * x * x * std::exp(-x * x); }, 10);
    CHECK(r.rho.entry(1, 1).real() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::fabs(r.rho.entry(0, 0).real()) < 1e-3);
    CHECK(r.rho.hermiticity_error() < 1e-6);
}

TEST_CASE("kernel reconstruction of a coherent state keeps the phase")
{
    // <X theta|alpha> has mean sqrt2 Re(alpha e^{-i theta}) and variance 1/2
    const cd alpha(0.5, 0.3);
    auto w = [alpha](double x, double theta) {
        const double mean = kSqrt2 * (alpha * std::polar(1.0, -theta)).real();
        return std::exp(-(x - mean) * (x - mean)) / kSqrtPi;
    };
    const auto r = kernel_reconstruct_density(w, 5);
    const double g = std::exp(-std::norm(alpha));
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            const cd ref = g * std::pow(alpha, m) * std::pow(std::conj(alpha), n) / std::sqrt(factorial(m) * factorial(n));
            CHECK(std::abs(r.rho.entry(m, n) - ref) < 1e-3);
        }
}

TEST_CASE("kernel reconstruction validates its inputs")
{
    auto vac = [](double x, double) { return std::exp(-x * x) / kSqrtPi; };
    CHECK_THROWS_AS(kernel_reconstruct_density(vac, 11), DomainError);
    CHECK_THROWS_AS(kernel_reconstruct_density(vac, 0), DomainError);
    KernelConfig bad;
    bad.extrapolation_levels = 1;
    CHECK_THROWS_AS(kernel_reconstruct_density(vac, 3, bad), ConfigError);

    // A coarse k grid cannot settle the extrapolation; the error carries the diagnostics.
    KernelConfig coarse;
    coarse.k_nodes = 4;
    coarse.tolerance = 1e-9;
    try {
        kernel_reconstruct_density(vac, 4, coarse);
        FAIL("expected an AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(std::string(e.what()).find("regularizer") != std::string::npos);
    }
}
