#pragma once

#include "tomobell/density_matrix.hpp"
#include "tomobell/special_functions.hpp"
#include "tomobell/states.hpp"

#include <functional>

namespace tomobell {

/// Parameters of the measured quadrature X = mu q + nu p.
struct SymplecticSetting {
    double mu;
    double nu;

    /// Homodyne detection with local-oscillator phase theta.
    static SymplecticSetting homodyne(double theta);
    /// Throws DomainError for (0, 0) or non-finite components.
    void validate() const;
};

/// Sign-binned joint probabilities at one pair of homodyne angles.
struct SignBinnedProbs {
    double w_pp = 0.0;
    double w_pm = 0.0;
    double w_mp = 0.0;
    double w_mm = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;

    double sum() const { return w_pp + w_pm + w_mp + w_mm; }
};

/// Coefficients of the squeezed-vacuum tomogram (2/pi) N exp(-2a X1^2 - 2a X2^2 - 4b X1 X2).
struct GaussianTomogramParams {
    double a;
    double b;
    double N;
};

/// a, b and N = sqrt(a^2 - b^2) for squeezing s at angle sum theta1 + theta2.
GaussianTomogramParams gaussian_tomogram_params(double s, double theta_sum);

struct RadonConfig {
    double half_width = 8.0; ///< integration range [-L, L] along each projection line
    int nodes = 48;          ///< initial Gauss-Legendre nodes per line
    int max_refinements = 3; ///< node doublings before giving up
    double tolerance = 1e-9; ///< absolute change accepted between refinements
    WignerConfig wigner;
};

/// Tomogram by numerical line projection of the state's Wigner function.
/// Throws AccuracyError when successive refinements differ by more than the tolerance.
double radon_forward(const TwoModeState& state, double x1, SymplecticSetting m1, double x2,
                     SymplecticSetting m2, const RadonConfig& config = {});

double radon_forward(const TwoModeState& state, double x1, double theta1, double x2, double theta2,
                     const RadonConfig& config = {});

/// Single-mode projection of an arbitrary phase-space function.
double radon_single_mode(const std::function<double(double, double)>& wigner, double x,
                         SymplecticSetting m, const RadonConfig& config = {});

/// Closed-form homodyne tomogram of a benchmark state in its native scale.
/// ExplicitFock states are evaluated from their Fock matrix.
double tomogram_closed_form(const TwoModeState& state, double x1, double theta1, double x2, double theta2);

/// <X1 theta1, X2 theta2| rho |X1 theta1, X2 theta2> for a two-mode Fock matrix (hbar = 1).
double tomogram_from_density(const DensityMatrix& rho, double x1, double theta1, double x2, double theta2);

/// <X theta| rho |X theta> for a single-mode Fock matrix (hbar = 1).
double single_mode_tomogram(const DensityMatrix& rho, double x, double theta);

/// Pair-coherent angular integral I by periodic-trapezoid quadrature of the
/// shifted integrand.  Requires order >= 64; throws AccuracyError when the
/// half-order estimate disagrees by more than 1e-10 relative.
cd pair_coherent_integral_direct(double x1, double theta1, double x2, double theta2, double r, int order = 128);

struct SeriesResult {
    cd value;
    int terms;
    double tail_bound; ///< rigorous bound on the neglected terms
};

/// I = 2 pi sum_n H_n(X1) H_n(X2) alpha^{2n} / (2^n (n!)^2), alpha = r e^{-i phi0}.
/// Throws ConvergenceError if the tail bound is not below 1e-12 * max(1, |I|) by max_terms.
SeriesResult pair_coherent_integral_series(double x1, double x2, double phi0, double r, int max_terms = 400);

using JointDensity = std::function<double(double, double)>;

struct QuadrantConfig {
    double scale = 3.0;       ///< X = scale * atanh(u) maps u in [0, 1) to [0, inf)
    int nodes = 16;           ///< Gauss-Legendre nodes per panel
    int initial_panels = 2;
    int max_doublings = 8;
    double tolerance = 1e-10; ///< max change of any quadrant between doublings
};

/// The four quadrant integrals of a normalized joint density.
/// Throws AccuracyError on non-convergence and NormalizationError if the
/// four probabilities sum to 1 only within more than 1e-6.
SignBinnedProbs sign_binned_numeric(const JointDensity& tomogram, double theta1, double theta2,
                                    const QuadrantConfig& config = {});

struct PairCoherentProbConfig {
    int order = 96; ///< periodic-trapezoid nodes per angle
};

/// Complex-valued quadrant probabilities of the pair-coherent state before
/// taking the real part; the imaginary parts vanish analytically.
struct PairCoherentProbDetail {
    cd w_pp, w_pm, w_mp, w_mm;
    double max_imag_residue() const;
};

PairCoherentProbDetail pair_coherent_probs(double r, double theta1, double theta2,
                                           const PairCoherentProbConfig& config = {});

/// Closed-form sign-binned probabilities of a benchmark state.
SignBinnedProbs sign_binned_closed_form(const TwoModeState& state, double theta1, double theta2,
                                        const PairCoherentProbConfig& config = {});

} // namespace tomobell
