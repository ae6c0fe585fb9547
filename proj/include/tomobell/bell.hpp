#pragma once

#include "tomobell/density_matrix.hpp"
#include "tomobell/nelder_mead.hpp"
#include "tomobell/states.hpp"
#include "tomobell/tomography.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace tomobell {

/// Homodyne angles of a CHSH test: (theta1, theta2), (theta1, theta2'), (theta1', theta2), (theta1', theta2').
struct BellAnglesQuadrature {
    double theta1 = 0.0;
    double theta1p = 0.0;
    double theta2 = 0.0;
    double theta2p = 0.0;

    /// Copy with every angle reduced to [0, 2 pi).
    BellAnglesQuadrature reduced() const;
};

using Vec3 = Eigen::Vector3d;

/// Unit vector in the x-z plane: (sin theta, 0, cos theta).
Vec3 coplanar_direction(double theta);

/// Pseudospin measurement directions u, u' (mode 1) and v, v' (mode 2).
struct PseudospinSettings {
    Vec3 u, up, v, vp;

    static PseudospinSettings coplanar(double theta_u, double theta_up, double theta_v, double theta_vp);
    /// Throws DomainError if any vector deviates from unit norm by more than 1e-12.
    void validate() const;
};

/// Pseudospin operators truncated at an even cutoff.
struct PseudospinOps {
    Eigen::MatrixXcd sx, sy, sz;
};

/// Throws DomainError for odd cutoff or cutoff < 2.
PseudospinOps pseudospin_matrices(int cutoff);

/// Tr[rho (u.S) x (v.S)] for a two-mode Fock matrix with even cutoff.
/// Throws DimensionError for single-mode input or an odd cutoff, AccuracyError if the
/// imaginary residue exceeds 1e-10.
double correlation_pseudospin(const DensityMatrix& rho, const Vec3& u, const Vec3& v);

/// Coplanar pseudospin correlation of a benchmark state as printed:
///   squeezed vacuum  cos u cos v + 2 lambda/(1 + lambda^2) sin u sin v
///   Fock pair        cos(u - v) for n = 1, cos u cos v otherwise
///   pair-coherent    cos u cos v + r^2 (1 - J0(2r^2)/I0(2r^2)) sin u sin v
double closed_form_correlation(const TwoModeState& state, double theta_u, double theta_v);

/// Coefficient of sin u sin v in closed_form_correlation().
double closed_form_xx(const TwoModeState& state);

/// <Sx x Sx> = 2 sum_k c_{2k} c_{2k+1} from the Schmidt coefficients at the given cutoff.
double fock_xx(const TwoModeState& state, int cutoff = kDefaultCutoff);

/// Closed-form pair-coherent x-x coefficient against the Fock-basis value.
struct PseudospinDiscrepancy {
    double r;
    int cutoff;
    double closed_form;
    double fock;
    double difference;        ///< |closed_form - fock|
    double truncation_deficit;
    bool closed_form_exceeds_one;
    bool agree;               ///< difference <= tolerance
};

PseudospinDiscrepancy pair_coherent_pseudospin_check(double r, int cutoff = kDefaultCutoff, double tolerance = 1e-6);

/// Coplanar correlation cos u cos v + xx sin u sin v.
double coplanar_correlation(double xx, double theta_u, double theta_v);

/// E = w++ - w+- - w-+ + w--.  Throws NormalizationError if the probabilities sum to 1 only within more than 1e-9.
double correlation_tomographic(const SignBinnedProbs& probs);

/// |E(a, b) + E(a, b') + E(a', b) - E(a', b')|.
double chsh(double e_ab, double e_abp, double e_apb, double e_apbp);

using CorrelationFunction = std::function<double(double, double)>;

/// CHSH value of a two-angle correlation at the given settings.
double chsh(const CorrelationFunction& e, const BellAnglesQuadrature& angles);

struct FirstAngleMaximum {
    double theta;
    double value;
};

/// Exact maximum over the first angle of |E(t, b) + E(t, b') + E(a', b) - E(a', b')|
/// for correlations of the form cos t f(.) + sin t g(.) (any pseudospin correlation with
/// coplanar u).  The maximum is sqrt(P^2 + Q^2) + |R|.
FirstAngleMaximum maximize_over_first_angle(const CorrelationFunction& e, double theta_b, double theta_ap,
                                            double theta_bp);

struct ChshOptimizerConfig {
    int grid = 24;  ///< points per angle on [0, 2 pi)
    int starts = 4; ///< best grid cells refined by Nelder-Mead
    NelderMeadConfig nelder_mead;
};

struct ChshMaximum {
    BellAnglesQuadrature angles;
    double value;
    double grid_value; ///< best value on the coarse grid
    int evaluations;
};

/// Coarse grid search followed by Nelder-Mead refinement of the best cells.
/// The correlation is tabulated once on the grid x grid angle pairs, so the
/// grid^4 search costs grid^2 evaluations.  Deterministic.
/// Throws AccuracyError if the correlation returns a non-finite value.
ChshMaximum maximize_chsh(const CorrelationFunction& e, const ChshOptimizerConfig& config = {});

/// Sign-binned correlation of a benchmark state from the closed-form probabilities.
double tomographic_correlation(const TwoModeState& state, double theta1, double theta2,
                               const PairCoherentProbConfig& config = {});

} // namespace tomobell
