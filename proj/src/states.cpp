#include "tomobell/states.hpp"

#include "tomobell/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace tomobell {

double SqueezedVacuum::squeezing() const
{
    return std::atanh(lambda);
}

TwoModeState TwoModeState::squeezed_vacuum(double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw DomainError("squeezed vacuum: lambda must satisfy 0 <= lambda < 1 (got " +
                          std::to_string(lambda) + ")");
    }
    return TwoModeState(SqueezedVacuum{lambda});
}

TwoModeState TwoModeState::squeezed_vacuum_from_s(double s)
{
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw DomainError("squeezed vacuum: squeezing s must be finite and >= 0");
    }
    const double lambda = std::tanh(s);
    if (!(lambda < 1.0)) throw DomainError("squeezed vacuum: s too large, tanh(s) rounds to 1");
    return TwoModeState(SqueezedVacuum{lambda});
}

TwoModeState TwoModeState::fock_pair(int n)
{
    if (n < 1) throw DomainError("Fock pair superposition: n must be >= 1 (got " + std::to_string(n) + ")");
    return TwoModeState(FockPairSuperposition{n});
}

TwoModeState TwoModeState::pair_coherent(double r)
{
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("pair-coherent state: r must be finite and > 0 (got " + std::to_string(r) + ")");
    }
    return TwoModeState(PairCoherent{r});
}

TwoModeState TwoModeState::explicit_fock(DensityMatrix dm)
{
    if (dm.modes() != 2) throw DomainError("explicit Fock state: density matrix must be two-mode");
    return TwoModeState(ExplicitFock{std::make_shared<const DensityMatrix>(std::move(dm))});
}

double TwoModeState::hbar() const
{
    return std::holds_alternative<SqueezedVacuum>(variant_) ? 0.5 : 1.0;
}

std::string TwoModeState::describe() const
{
    std::ostringstream out;
    out.precision(12);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                out << "squeezed-vacuum(lambda=" << s.lambda << ")";
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                out << "fock-pair(n=" << s.n << ")";
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                out << "pair-coherent(r=" << s.r << ")";
            } else {
                out << "explicit-fock(cutoff=" << s.dm->cutoff() << ")";
            }
        },
        variant_);
    return out.str();
}

SchmidtVector schmidt_coefficients(const TwoModeState& state, int cutoff)
{
    if (cutoff < 1) throw DomainError("schmidt_coefficients: cutoff must be >= 1");
    std::vector<double> c(cutoff, 0.0);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                double amp = std::sqrt(1.0 - s.lambda * s.lambda);
                for (int n = 0; n < cutoff; ++n) {
                    c[n] = amp;
                    amp *= s.lambda;
                }
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                c[0] = 1.0 / kSqrt2;
                if (s.n < cutoff) c[s.n] = 1.0 / kSqrt2;
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                const double r2 = s.r * s.r;
                double amp = 1.0 / std::sqrt(bessel_i0(2.0 * r2));
                for (int n = 0; n < cutoff; ++n) {
                    c[n] = amp;
                    amp *= r2 / (n + 1.0);
                }
            } else {
                throw UnsupportedStateError("schmidt_coefficients: explicit Fock states have no Schmidt form");
            }
        },
        state.variant());

    double norm = 0.0;
    for (double v : c) norm += v * v;
    return {std::move(c), 1.0 - norm};
}

DensityMatrix density_matrix(const TwoModeState& state, int cutoff)
{
    if (cutoff < 2) throw DomainError("density_matrix: cutoff must be >= 2");
    if (const auto* fock = std::get_if<ExplicitFock>(&state.variant())) {
        if (fock->dm->cutoff() != cutoff) {
            throw DimensionError("density_matrix: explicit state has cutoff " +
                                 std::to_string(fock->dm->cutoff()) + ", requested " + std::to_string(cutoff));
        }
        return *fock->dm;
    }
    const SchmidtVector schmidt = schmidt_coefficients(state, cutoff);
    const auto& c = schmidt.coefficients;

    std::vector<Eigen::Triplet<cd, long>> triplets;
    for (int n = 0; n < cutoff; ++n) {
        if (c[n] == 0.0) continue;
        for (int m = 0; m < cutoff; ++m) {
            if (c[m] == 0.0) continue;
            triplets.emplace_back(static_cast<long>(DensityMatrix::index(cutoff, n, n)),
                                  static_cast<long>(DensityMatrix::index(cutoff, m, m)), cd(c[n] * c[m], 0.0));
        }
    }
    const long dim = static_cast<long>(cutoff) * cutoff;
    DensityMatrix::Sparse entries(dim, dim);
    entries.setFromTriplets(triplets.begin(), triplets.end());
    return DensityMatrix(cutoff, 2, std::move(entries), schmidt.deficit);
}

DensityMatrix reduce_to_mode1(const DensityMatrix& two_mode)
{
    if (two_mode.modes() != 2) throw DimensionError("reduce_to_mode1: expected a two-mode matrix");
    const int nc = two_mode.cutoff();
    std::vector<Eigen::Triplet<cd, long>> triplets;
    const auto& e = two_mode.entries();
    for (long k = 0; k < e.outerSize(); ++k) {
        for (DensityMatrix::Sparse::InnerIterator it(e, k); it; ++it) {
            const long row = it.row();
            const long col = it.col();
            if (row % nc != col % nc) continue;
            triplets.emplace_back(row / nc, col / nc, it.value());
        }
    }
    DensityMatrix::Sparse reduced(nc, nc);
    reduced.setFromTriplets(triplets.begin(), triplets.end());
    return DensityMatrix(nc, 1, std::move(reduced), two_mode.trace_deficit());
}

namespace {

cd wigner_squeezed(const SqueezedVacuum& s, double q1, double p1, double q2, double p2)
{
    const double sq = s.squeezing();
    const double shrink = std::exp(-2.0 * sq);
    const double grow = std::exp(2.0 * sq);
    const double dq = q1 - q2;
    const double sp = p1 + p2;
    const double sq12 = q1 + q2;
    const double dp = p1 - p2;
    // 4/pi^2 already normalizes this Gaussian for every s: the two quadratic
    // forms have determinants e^{-4s}/4 and e^{4s}/4.
    return 4.0 / (kPi * kPi) * std::exp(-shrink * (dq * dq + sp * sp) - grow * (sq12 * sq12 + dp * dp));
}

cd wigner_fock_pair(const FockPairSuperposition& s, double q1, double p1, double q2, double p2)
{
    const int n = s.n;
    const cd z1(q1, -p1);
    const cd z2(q2, -p2);
    double coef = 1.0;
    for (int k = 1; k <= n; ++k) coef *= 2.0 / k;
    const cd cross = coef * (std::pow(z1, n) * std::pow(z2, n) + std::pow(std::conj(z1), n) * std::pow(std::conj(z2), n));
    const double r1 = q1 * q1 + p1 * p1;
    const double r2 = q2 * q2 + p2 * p2;
    const double diag = laguerre(n, 2.0 * r1) * laguerre(n, 2.0 * r2);
    return (1.0 + cross + diag) * std::exp(-r1 - r2) / (2.0 * kPi * kPi);
}

// Sum of the cross-Wigner functions of |r e^{i phi}, r e^{-i phi}><r e^{i phi'}, r e^{-i phi'}|
// over both phases.  With z_j^- = q_j - i p_j the double integral reads
//   int int exp(sqrt2 r [z1^- e^{i phi} + z2^- e^{-i phi} + conj(...)(phi')] - 2 r^2 cos(phi - phi')),
// a hermitian form A^H C A with A_j = exp(sqrt2 r (z1^- e^{i phi_j} + z2^- e^{-i phi_j}))
// and circulant C_{jl} = exp(-2 r^2 cos(phi_j - phi_l)).
cd wigner_pair_coherent(const PairCoherent& s, double q1, double p1, double q2, double p2, int order)
{
    if (order < 16) throw ConfigError("pair-coherent Wigner: angular quadrature order must be >= 16");
    const double r = s.r;
    const cd z1(q1, -p1);
    const cd z2(q2, -p2);
    const int m = order;
    std::vector<cd> a(m);
    std::vector<double> circ(m);
    const double h = 2.0 * kPi / m;
    for (int j = 0; j < m; ++j) {
        const cd e = std::polar(1.0, h * j);
        a[j] = std::exp(kSqrt2 * r * (z1 * e + z2 * std::conj(e)));
        circ[j] = std::exp(-2.0 * r * r * std::cos(h * j));
    }
    cd total = 0.0;
    for (int j = 0; j < m; ++j) {
        cd inner = 0.0;
        for (int l = 0; l < m; ++l) {
            const int d = j - l < 0 ? j - l + m : j - l;
            inner += std::conj(a[l]) * circ[d];
        }
        total += a[j] * inner;
    }
    total *= h * h;
    const double pref = 1.0 / (4.0 * kPi * kPi * kPi * kPi * bessel_i0(2.0 * r * r));
    return pref * std::exp(-q1 * q1 - p1 * p1 - q2 * q2 - p2 * p2) * total;
}

} // namespace

cd wigner_complex(const TwoModeState& state, double q1, double p1, double q2, double p2,
                  const WignerConfig& config)
{
    return std::visit(
        [&](const auto& s) -> cd {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return wigner_squeezed(s, q1, p1, q2, p2);
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                return wigner_fock_pair(s, q1, p1, q2, p2);
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                return wigner_pair_coherent(s, q1, p1, q2, p2, config.angular_order);
            } else {
                throw UnsupportedStateError("wigner: explicit Fock states have no Wigner evaluator");
            }
        },
        state.variant());
}

double wigner(const TwoModeState& state, double q1, double p1, double q2, double p2,
              const WignerConfig& config)
{
    return wigner_complex(state, q1, p1, q2, p2, config).real();
}

} // namespace tomobell
