#pragma once

#include "tomobell/density_matrix.hpp"
#include "tomobell/special_functions.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tomobell {

// Quadrature conventions.  Each benchmark state keeps the phase-space
// scale its closed forms are written in:
//   squeezed vacuum:   hbar = 1/2, vacuum W = (2/pi) exp(-2(q^2 + p^2)), Var(q) = 1/4
//   Fock pair, pair-coherent, explicit Fock:  hbar = 1, vacuum W = (1/pi) exp(-q^2 - p^2)
// A tomogram in one scale maps to the other by w_{1/2}(X1, X2) = 2 w_1(sqrt2 X1, sqrt2 X2).
// Sign-binned probabilities and every Bell quantity are scale invariant.

/// Two-mode squeezed vacuum sqrt(1 - lambda^2) sum_n lambda^n |n>|n>, lambda = tanh s.
///
/// wigner() and the tomograms use the phase-space form whose Fock expansion has
/// (-lambda)^n, i.e. mode 2 rotated by pi.  The pseudospin and Fock-matrix quantities
/// use the expansion above.  Sign-binned results map by theta2 -> theta2 + pi.
struct SqueezedVacuum {
    double lambda;
    double squeezing() const;
};

/// (|0>|0> + |n>|n>) / sqrt 2.
struct FockPairSuperposition {
    int n;
};

/// Pair-coherent state: phase average of |r e^{i phi}>|r e^{-i phi}>.
struct PairCoherent {
    double r;
};

/// Arbitrary two-mode Fock-basis state, hbar = 1.
struct ExplicitFock {
    std::shared_ptr<const DensityMatrix> dm;
};

class TwoModeState {
public:
    using Variant = std::variant<SqueezedVacuum, FockPairSuperposition, PairCoherent, ExplicitFock>;

    /// Throws DomainError unless 0 <= lambda < 1.
    static TwoModeState squeezed_vacuum(double lambda);
    static TwoModeState squeezed_vacuum_from_s(double s);
    /// Throws DomainError unless n >= 1.
    static TwoModeState fock_pair(int n);
    /// Throws DomainError unless r > 0.
    static TwoModeState pair_coherent(double r);
    /// Throws DomainError unless dm is a two-mode matrix.
    static TwoModeState explicit_fock(DensityMatrix dm);

    const Variant& variant() const { return variant_; }
    bool is_benchmark() const { return !std::holds_alternative<ExplicitFock>(variant_); }

    /// Phase-space scale used by wigner() and the tomograms of this state.
    double hbar() const;

    std::string describe() const;

private:
    explicit TwoModeState(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

/// Coefficients c_n of |psi> = sum_n c_n |n>|n>, truncated at the cutoff.
struct SchmidtVector {
    std::vector<double> coefficients;
    double deficit; ///< 1 - sum c_n^2
};

inline constexpr int kDefaultCutoff = 64;

/// Throws UnsupportedStateError for ExplicitFock, DomainError for cutoff < 1.
SchmidtVector schmidt_coefficients(const TwoModeState& state, int cutoff);

/// rho = |psi><psi| truncated at the cutoff (cutoff >= 2).
/// For ExplicitFock the stored matrix is returned if its cutoff matches.
DensityMatrix density_matrix(const TwoModeState& state, int cutoff = kDefaultCutoff);

/// Single-mode reduced density matrix of mode 1.
DensityMatrix reduce_to_mode1(const DensityMatrix& two_mode);

struct WignerConfig {
    /// Periodic-trapezoid order for each angular integral of the pair-coherent Wigner function.
    int angular_order = 128;
};

/// Two-mode Wigner function in the state's native scale, normalized to unit integral.
/// The complex variant exposes the imaginary residue of the defining expression.
cd wigner_complex(const TwoModeState& state, double q1, double p1, double q2, double p2,
                  const WignerConfig& config = {});

double wigner(const TwoModeState& state, double q1, double p1, double q2, double p2,
              const WignerConfig& config = {});

} // namespace tomobell
