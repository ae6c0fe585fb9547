#pragma once

#include "tomobell/density_matrix.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace tomobell {

/// Single-mode homodyne tomogram w(X, theta).
using SingleModeTomogram = std::function<double(double, double)>;

/// A tomogram sampled on a regular X grid at equally spaced angles theta_j = pi j / n in [0, pi).
struct TomogramSamples {
    std::vector<double> x;
    std::vector<double> theta;
    Eigen::MatrixXd values; ///< values(j, i) = w(x[i], theta[j])

    static TomogramSamples sample(const SingleModeTomogram& tomogram, double x_half_width, int x_points,
                                  int theta_points);
};

struct FourierInversionConfig {
    double k_max = 40.0;  ///< frequency cutoff
    int k_nodes = 160;    ///< Gauss-Legendre nodes on [0, k_max]
    double window = 40.0; ///< Gaussian damping exp(-k^2 / (2 window^2))
};

struct WignerGrid {
    std::vector<double> q;
    std::vector<double> p;
    Eigen::MatrixXd values;   ///< values(i, j) = W(q[i], p[j])
    double max_imag_residue;  ///< largest |Im W| before taking the real part
    double integral;          ///< trapezoid integral of W over the grid
};

/// Filtered back-projection W(q, p) = (2 pi)^{-2} int dtheta int |k| dk chi(k, theta) e^{-ik(q cos + p sin)}
/// with chi(k, theta) = int w(X, theta) e^{ikX} dX.  The (2 pi)^{-2} constant is the one that makes
/// the vacuum integrate to one; the formula is independent of the quadrature scale.
///
/// q and p must be regular grids with at least two points that cover the state's support.
/// Throws AccuracyError if the grid integral of W deviates from 1 by more than 5%.
WignerGrid inverse_fourier_wigner(const TomogramSamples& samples, const std::vector<double>& q,
                                  const std::vector<double>& p, const FourierInversionConfig& config = {});

struct KernelConfig {
    double x_half_width = 8.0;
    int x_nodes = 128;
    double k_max = 12.0;
    int k_nodes = 64;
    int theta_nodes = 48;         ///< trapezoid nodes on [0, 2 pi)
    double regularizer = 0.05;    ///< largest Gaussian regularizer exp(-eps k^2)
    int extrapolation_levels = 5; ///< eps, eps/2, ... combined by Richardson extrapolation
    double tolerance = 1e-3;      ///< accepted change between the last two extrapolants
};

struct KernelReconstruction {
    DensityMatrix rho;
    std::vector<double> regularizers;
    double extrapolation_change; ///< max |last - previous| Richardson estimate
};

/// Fock-basis reconstruction rho_mn = int w(X, mu, nu) <m|K(X, mu, nu)|n> dX dmu dnu with
/// K = (2 pi)^{-1} exp(i(X - mu q - nu p)).  In polar form mu + i nu = k e^{i theta} and with
/// [q, p] = i the operator part is D(beta), beta = -i k e^{i theta} / sqrt2, so the tomogram must
/// be in the hbar = 1 scale.  The k integral carries exp(-eps k^2), extrapolated to eps = 0.
///
/// Throws DomainError for cutoff outside [1, 10] and AccuracyError if the Richardson
/// extrapolation toward zero regularization does not settle.
KernelReconstruction kernel_reconstruct_density(const SingleModeTomogram& tomogram, int cutoff,
                                                const KernelConfig& config = {});

/// <m| D(beta) |n> for m, n < cutoff, row-major cutoff x cutoff.
std::vector<std::complex<double>> displacement_matrix(std::complex<double> beta, int cutoff);

} // namespace tomobell
