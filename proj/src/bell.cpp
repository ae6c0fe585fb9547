#include "tomobell/bell.hpp"

#include "tomobell/errors.hpp"
#include "tomobell/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

namespace tomobell {

namespace {

double wrap_angle(double t)
{
    double r = std::fmod(t, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r;
}

Eigen::MatrixXcd directed_spin(const PseudospinOps& ops, const Vec3& n)
{
    return n.x() * ops.sx + n.y() * ops.sy + n.z() * ops.sz;
}

} // namespace

BellAnglesQuadrature BellAnglesQuadrature::reduced() const
{
    return {wrap_angle(theta1), wrap_angle(theta1p), wrap_angle(theta2), wrap_angle(theta2p)};
}

Vec3 coplanar_direction(double theta)
{
    return {std::sin(theta), 0.0, std::cos(theta)};
}

PseudospinSettings PseudospinSettings::coplanar(double theta_u, double theta_up, double theta_v, double theta_vp)
{
    return {coplanar_direction(theta_u), coplanar_direction(theta_up), coplanar_direction(theta_v),
            coplanar_direction(theta_vp)};
}

void PseudospinSettings::validate() const
{
    for (const Vec3* n : {&u, &up, &v, &vp}) {
        if (!n->allFinite() || std::fabs(n->norm() - 1.0) > 1e-12) {
            throw DomainError("pseudospin settings: measurement directions must be unit vectors");
        }
    }
}

PseudospinOps pseudospin_matrices(int cutoff)
{
    if (cutoff < 2 || cutoff % 2 != 0) {
        throw DomainError("pseudospin_matrices: cutoff must be even and >= 2, got " + std::to_string(cutoff));
    }
    PseudospinOps ops;
    ops.sx = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    ops.sy = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    ops.sz = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    const cd i(0.0, 1.0);
    for (int k = 0; 2 * k + 1 < cutoff; ++k) {
        const int e = 2 * k;
        const int o = 2 * k + 1;
        ops.sx(e, o) = 1.0;
        ops.sx(o, e) = 1.0;
        ops.sy(e, o) = -i;
        ops.sy(o, e) = i;
        ops.sz(e, e) = 1.0;
        ops.sz(o, o) = -1.0;
    }
    return ops;
}

double correlation_pseudospin(const DensityMatrix& rho, const Vec3& u, const Vec3& v)
{
    if (rho.modes() != 2) throw DimensionError("correlation_pseudospin: need a two-mode density matrix");
    const int cutoff = rho.cutoff();
    if (cutoff % 2 != 0) {
        throw DimensionError("correlation_pseudospin: cutoff " + std::to_string(cutoff) +
                             " is odd and breaks the pseudospin pairing");
    }
    const PseudospinOps ops = pseudospin_matrices(cutoff);
    const Eigen::MatrixXcd a = directed_spin(ops, u);
    const Eigen::MatrixXcd b = directed_spin(ops, v);

    // Tr[rho (A x B)] = sum_ij rho_ij A_{j1 i1} B_{j2 i2}
    cd sum{};
    const auto& m = rho.entries();
    for (long col = 0; col < m.outerSize(); ++col) {
        const long j1 = col / cutoff;
        const long j2 = col % cutoff;
        for (DensityMatrix::Sparse::InnerIterator it(m, col); it; ++it) {
            const long i1 = it.row() / cutoff;
            const long i2 = it.row() % cutoff;
            sum += it.value() * a(j1, i1) * b(j2, i2);
        }
    }
    if (std::fabs(sum.imag()) > 1e-10) {
        throw AccuracyError("correlation_pseudospin: imaginary residue " + std::to_string(sum.imag()) +
                            " exceeds 1e-10; is rho hermitian?");
    }
    return sum.real();
}

double closed_form_xx(const TwoModeState& state)
{
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return 2.0 * s.lambda / (1.0 + s.lambda * s.lambda);
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                return s.n == 1 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                const double x = 2.0 * s.r * s.r;
                return s.r * s.r * (1.0 - bessel_j0(x) / bessel_i0(x));
            } else {
                throw UnsupportedStateError("closed_form_correlation: no closed form for explicit Fock states");
            }
        },
        state.variant());
}

double coplanar_correlation(double xx, double theta_u, double theta_v)
{
    return std::cos(theta_u) * std::cos(theta_v) + xx * std::sin(theta_u) * std::sin(theta_v);
}

double closed_form_correlation(const TwoModeState& state, double theta_u, double theta_v)
{
    return coplanar_correlation(closed_form_xx(state), theta_u, theta_v);
}

double fock_xx(const TwoModeState& state, int cutoff)
{
    const SchmidtVector sv = schmidt_coefficients(state, cutoff);
    const auto& c = sv.coefficients;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); k += 2) sum += 2.0 * c[k] * c[k + 1];
    return sum;
}

PseudospinDiscrepancy pair_coherent_pseudospin_check(double r, int cutoff, double tolerance)
{
    const TwoModeState state = TwoModeState::pair_coherent(r);
    PseudospinDiscrepancy d;
    d.r = r;
    d.cutoff = cutoff;
    d.closed_form = closed_form_xx(state);
    d.fock = fock_xx(state, cutoff);
    d.difference = std::fabs(d.closed_form - d.fock);
    d.truncation_deficit = schmidt_coefficients(state, cutoff).deficit;
    d.closed_form_exceeds_one = d.closed_form > 1.0;
    d.agree = d.difference <= tolerance;
    return d;
}

double correlation_tomographic(const SignBinnedProbs& probs)
{
    const double total = probs.sum();
    if (!(std::fabs(total - 1.0) <= 1e-9)) {
        throw NormalizationError("correlation_tomographic: probabilities sum to " + std::to_string(total));
    }
    return probs.w_pp - probs.w_pm - probs.w_mp + probs.w_mm;
}

double chsh(double e_ab, double e_abp, double e_apb, double e_apbp)
{
    return std::fabs(e_ab + e_abp + e_apb - e_apbp);
}

double chsh(const CorrelationFunction& e, const BellAnglesQuadrature& a)
{
    return chsh(e(a.theta1, a.theta2), e(a.theta1, a.theta2p), e(a.theta1p, a.theta2), e(a.theta1p, a.theta2p));
}

FirstAngleMaximum maximize_over_first_angle(const CorrelationFunction& e, double theta_b, double theta_ap,
                                            double theta_bp)
{
    const double p = e(0.0, theta_b) + e(0.0, theta_bp);
    const double q = e(0.5 * kPi, theta_b) + e(0.5 * kPi, theta_bp);
    const double r = e(theta_ap, theta_b) - e(theta_ap, theta_bp);
    double theta = std::atan2(q, p);
    if (r < 0.0) theta += kPi;
    return {wrap_angle(theta), std::hypot(p, q) + std::fabs(r)};
}

ChshMaximum maximize_chsh(const CorrelationFunction& e, const ChshOptimizerConfig& config)
{
    if (config.grid < 2 || config.starts < 1) throw ConfigError("maximize_chsh: grid >= 2 and starts >= 1 required");
    const int g = config.grid;
    const double step = 2.0 * kPi / g;
    auto checked = [&](double t1, double t2) {
        const double v = e(t1, t2);
        if (!std::isfinite(v)) {
            throw AccuracyError("maximize_chsh: correlation is not finite at (" + std::to_string(t1) + ", " +
                                std::to_string(t2) + ")");
        }
        return v;
    };

    Eigen::MatrixXd table(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) table(i, j) = checked(i * step, j * step);
    int evaluations = g * g;

    struct Cell {
        double value;
        int a, ap, b, bp;
    };
    std::vector<Cell> best;
    auto consider = [&](const Cell& c) {
        if (static_cast<int>(best.size()) < config.starts) {
            best.push_back(c);
        } else if (c.value > best.back().value) {
            best.back() = c;
        } else {
            return;
        }
        std::sort(best.begin(), best.end(), [](const Cell& x, const Cell& y) { return x.value > y.value; });
    };
    for (int a = 0; a < g; ++a)
        for (int ap = 0; ap < g; ++ap)
            for (int b = 0; b < g; ++b)
                for (int bp = 0; bp < g; ++bp) {
                    const double v = chsh(table(a, b), table(a, bp), table(ap, b), table(ap, bp));
                    if (static_cast<int>(best.size()) < config.starts || v > best.back().value) {
                        consider({v, a, ap, b, bp});
                    }
                }

    ChshMaximum out;
    out.grid_value = best.front().value;
    out.value = -1.0;
    auto objective = [&](const std::vector<double>& x) {
        return -chsh(checked(x[0], x[2]), checked(x[0], x[3]), checked(x[1], x[2]), checked(x[1], x[3]));
    };
    for (const Cell& c : best) {
        NelderMeadConfig nm = config.nelder_mead;
        nm.initial_step = std::min(nm.initial_step, 0.5 * step);
        const NelderMeadResult r = nelder_mead(objective, {c.a * step, c.ap * step, c.b * step, c.bp * step}, nm);
        evaluations += 4 * r.evaluations;
        if (-r.value > out.value) {
            out.value = -r.value;
            out.angles = BellAnglesQuadrature{r.x[0], r.x[1], r.x[2], r.x[3]}.reduced();
        }
    }
    out.evaluations = evaluations;
    return out;
}

double tomographic_correlation(const TwoModeState& state, double theta1, double theta2,
                               const PairCoherentProbConfig& config)
{
    return correlation_tomographic(sign_binned_closed_form(state, theta1, theta2, config));
}

} // namespace tomobell
