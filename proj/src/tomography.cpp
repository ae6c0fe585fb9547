#include "tomobell/tomography.hpp"

#include "tomobell/errors.hpp"
#include "tomobell/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace tomobell {

SymplecticSetting SymplecticSetting::homodyne(double theta)
{
    return {std::cos(theta), std::sin(theta)};
}

void SymplecticSetting::validate() const
{
    if (!std::isfinite(mu) || !std::isfinite(nu) || (mu == 0.0 && nu == 0.0)) {
        throw DomainError("symplectic setting: (mu, nu) must be finite and not both zero");
    }
}

GaussianTomogramParams gaussian_tomogram_params(double s, double theta_sum)
{
    const double ch = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    const double cs = std::cos(theta_sum);
    const double det = ch * ch - sh * sh * cs * cs;
    return {ch / det, sh * cs / det, 1.0 / std::sqrt(det)};
}

namespace {

struct Line {
    double q0, p0; // foot point
    double dq, dp; // unit direction
    double jacobian;
};

Line projection_line(double x, SymplecticSetting m)
{
    m.validate();
    const double k2 = m.mu * m.mu + m.nu * m.nu;
    const double k = std::sqrt(k2);
    return {x * m.mu / k2, x * m.nu / k2, -m.nu / k, m.mu / k, 1.0 / k};
}

template <typename Estimate>
double refine_until_stable(const RadonConfig& config, Estimate&& estimate)
{
    if (config.nodes < 2 || config.half_width <= 0.0) throw ConfigError("radon: invalid grid configuration");
    int nodes = config.nodes;
    double previous = estimate(gauss_legendre(nodes, -config.half_width, config.half_width));
    for (int level = 0; level < config.max_refinements; ++level) {
        nodes *= 2;
        const double current = estimate(gauss_legendre(nodes, -config.half_width, config.half_width));
        if (std::fabs(current - previous) <= config.tolerance) return current;
        previous = current;
    }
    throw AccuracyError("radon: projection did not converge after " + std::to_string(config.max_refinements) +
                        " refinements (last change above " + std::to_string(config.tolerance) + ")");
}

} // namespace

double radon_forward(const TwoModeState& state, double x1, SymplecticSetting m1, double x2,
                     SymplecticSetting m2, const RadonConfig& config)
{
    const Line l1 = projection_line(x1, m1);
    const Line l2 = projection_line(x2, m2);
    return refine_until_stable(config, [&](const QuadratureRule& rule) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t1 = rule.nodes[i];
            const double q1 = l1.q0 + t1 * l1.dq;
            const double p1 = l1.p0 + t1 * l1.dp;
            double inner = 0.0;
            for (std::size_t j = 0; j < rule.size(); ++j) {
                const double t2 = rule.nodes[j];
                inner += rule.weights[j] * wigner(state, q1, p1, l2.q0 + t2 * l2.dq, l2.p0 + t2 * l2.dp, config.wigner);
            }
            sum += rule.weights[i] * inner;
        }
        return sum * l1.jacobian * l2.jacobian;
    });
}

double radon_forward(const TwoModeState& state, double x1, double theta1, double x2, double theta2,
                     const RadonConfig& config)
{
    return radon_forward(state, x1, SymplecticSetting::homodyne(theta1), x2, SymplecticSetting::homodyne(theta2),
                         config);
}

double radon_single_mode(const std::function<double(double, double)>& wigner_fn, double x, SymplecticSetting m,
                         const RadonConfig& config)
{
    const Line line = projection_line(x, m);
    return refine_until_stable(config, [&](const QuadratureRule& rule) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = rule.nodes[i];
            sum += rule.weights[i] * wigner_fn(line.q0 + t * line.dq, line.p0 + t * line.dp);
        }
        return sum * line.jacobian;
    });
}

SeriesResult pair_coherent_integral_series(double x1, double x2, double phi0, double r, int max_terms)
{
    // With h_n(x) = H_n(x) / sqrt(2^n n!) the terms are h_n(X1) h_n(X2) (alpha^2)^n / n!,
    // and Cramer's bound |h_n(x)| <= K e^{x^2/2}, K < 1.0865, turns the tail into an
    // exponential-series remainder.
    const cd alpha2 = std::polar(r * r, -2.0 * phi0);
    const double a2 = r * r;
    const double envelope = 1.0865 * 1.0865 * std::exp(0.5 * (x1 * x1 + x2 * x2));

    double h1_prev = 0.0, h1 = 1.0;
    double h2_prev = 0.0, h2 = 1.0;
    cd power = 1.0; // (alpha^2)^n / n!
    double magnitude = 1.0; // |alpha|^{2n} / n!
    cd sum = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        sum += h1 * h2 * power;

        // Remainder sum_{k>n} |alpha|^{2k}/k! <= 2 * next term once |alpha|^2/(n+2) <= 1/2.
        const double next_magnitude = magnitude * a2 / (n + 1.0);
        if (a2 / (n + 2.0) <= 0.5) {
            const double tail = 2.0 * envelope * next_magnitude;
            if (tail < 1e-12 * std::max(1.0, std::abs(sum))) {
                return {2.0 * kPi * sum, n + 1, 2.0 * kPi * tail};
            }
        }

        const double k = n;
        const double h1_next = std::sqrt(2.0 / (k + 1.0)) * x1 * h1 - std::sqrt(k / (k + 1.0)) * h1_prev;
        const double h2_next = std::sqrt(2.0 / (k + 1.0)) * x2 * h2 - std::sqrt(k / (k + 1.0)) * h2_prev;
        h1_prev = h1;
        h1 = h1_next;
        h2_prev = h2;
        h2 = h2_next;
        power *= alpha2 / (k + 1.0);
        magnitude = next_magnitude;
    }
    throw ConvergenceError("pair_coherent_integral_series: tail bound not met after " +
                           std::to_string(max_terms) + " terms");
}

cd pair_coherent_integral_direct(double x1, double theta1, double x2, double theta2, double r, int order)
{
    if (order < 64) throw ConfigError("pair_coherent_integral_direct: order must be >= 64");
    if (order % 2 != 0) ++order;
    const double phi0 = 0.5 * (theta1 + theta2);
    const cd alpha = std::polar(r, -phi0);
    const double h = 2.0 * kPi / order;
    cd full = 0.0;
    cd half = 0.0;
    for (int j = 0; j < order; ++j) {
        const cd e = std::polar(1.0, h * j);
        const cd t1 = alpha * e;
        const cd t2 = alpha * std::conj(e);
        const cd f = std::exp(-0.5 * t1 * t1 + kSqrt2 * t1 * x1 - 0.5 * t2 * t2 + kSqrt2 * t2 * x2);
        full += f;
        if (j % 2 == 0) half += f;
    }
    full *= h;
    half *= 2.0 * h;
    if (std::abs(full - half) > 1e-10 * std::max(1.0, std::abs(full))) {
        throw AccuracyError("pair_coherent_integral_direct: order " + std::to_string(order) +
                            " under-resolves the integrand");
    }
    return full;
}

double tomogram_from_density(const DensityMatrix& rho, double x1, double theta1, double x2, double theta2)
{
    if (rho.modes() != 2) throw DimensionError("tomogram_from_density: expected a two-mode matrix");
    const int nc = rho.cutoff();
    std::vector<double> psi1(nc), psi2(nc);
    hermite_functions(x1, psi1);
    hermite_functions(x2, psi2);
    // <X, theta | n> = psi_n(X) e^{-i n theta}
    std::vector<cd> amp(static_cast<std::size_t>(nc) * nc);
    for (int n1 = 0; n1 < nc; ++n1) {
        for (int n2 = 0; n2 < nc; ++n2) {
            amp[DensityMatrix::index(nc, n1, n2)] =
                psi1[n1] * psi2[n2] * std::polar(1.0, -(n1 * theta1 + n2 * theta2));
        }
    }
    cd total = 0.0;
    const auto& e = rho.entries();
    for (long k = 0; k < e.outerSize(); ++k) {
        for (DensityMatrix::Sparse::InnerIterator it(e, k); it; ++it) {
            total += amp[it.row()] * it.value() * std::conj(amp[it.col()]);
        }
    }
    return total.real();
}

double single_mode_tomogram(const DensityMatrix& rho, double x, double theta)
{
    if (rho.modes() != 1) throw DimensionError("single_mode_tomogram: expected a single-mode matrix");
    const int nc = rho.cutoff();
    std::vector<double> psi(nc);
    hermite_functions(x, psi);
    cd total = 0.0;
    const auto& e = rho.entries();
    for (long k = 0; k < e.outerSize(); ++k) {
        for (DensityMatrix::Sparse::InnerIterator it(e, k); it; ++it) {
            total += psi[it.row()] * psi[it.col()] * it.value() * std::polar(1.0, (it.col() - it.row()) * theta);
        }
    }
    return total.real();
}

double tomogram_closed_form(const TwoModeState& state, double x1, double theta1, double x2, double theta2)
{
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                const auto g = gaussian_tomogram_params(s.squeezing(), theta1 + theta2);
                return 2.0 / kPi * g.N *
                       std::exp(-2.0 * g.a * x1 * x1 - 2.0 * g.a * x2 * x2 - 4.0 * g.b * x1 * x2);
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                // |psi_0 psi_0 + e^{-in(theta1+theta2)} psi_n psi_n|^2 / 2 with psi_n = pi^{-1/4} h_n(x) e^{-x^2/2}
                std::vector<double> h1(s.n + 1), h2(s.n + 1);
                normalized_hermite(x1, h1);
                normalized_hermite(x2, h2);
                const double cross = h1[s.n] * h2[s.n];
                const double gauss = std::exp(-x1 * x1 - x2 * x2);
                return (1.0 + 2.0 * cross * std::cos(s.n * (theta1 + theta2)) + cross * cross) * gauss / (2.0 * kPi);
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                const auto series = pair_coherent_integral_series(x1, x2, 0.5 * (theta1 + theta2), s.r);
                // N^2 e^{-2 r^2} / pi = 1 / (4 pi^3 I0(2 r^2))
                return std::norm(series.value) * std::exp(-x1 * x1 - x2 * x2) /
                       (4.0 * kPi * kPi * kPi * bessel_i0(2.0 * s.r * s.r));
            } else {
                return tomogram_from_density(*s.dm, x1, theta1, x2, theta2);
            }
        },
        state.variant());
}

SignBinnedProbs sign_binned_numeric(const JointDensity& tomogram, double theta1, double theta2,
                                    const QuadrantConfig& config)
{
    if (config.nodes < 2 || config.initial_panels < 1 || config.scale <= 0.0) {
        throw ConfigError("sign_binned_numeric: invalid quadrature configuration");
    }
    auto evaluate = [&](int panels) {
        const QuadratureRule rule = composite_gauss_legendre(config.nodes, panels, 0.0, 1.0);
        const std::size_t n = rule.size();
        std::vector<double> x(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rule.nodes[i];
            x[i] = config.scale * std::atanh(u);
            w[i] = rule.weights[i] * config.scale / (1.0 - u * u);
        }
        std::array<double, 4> q{}; // ++, +-, -+, --
        for (std::size_t i = 0; i < n; ++i) {
            std::array<double, 4> row{};
            for (std::size_t j = 0; j < n; ++j) {
                row[0] += w[j] * tomogram(x[i], x[j]);
                row[1] += w[j] * tomogram(x[i], -x[j]);
                row[2] += w[j] * tomogram(-x[i], x[j]);
                row[3] += w[j] * tomogram(-x[i], -x[j]);
            }
            for (int k = 0; k < 4; ++k) q[k] += w[i] * row[k];
        }
        return q;
    };

    int panels = config.initial_panels;
    auto previous = evaluate(panels);
    for (int level = 0; level < config.max_doublings; ++level) {
        panels *= 2;
        const auto current = evaluate(panels);
        double change = 0.0;
        for (int k = 0; k < 4; ++k) change = std::max(change, std::fabs(current[k] - previous[k]));
        if (change < config.tolerance) {
            SignBinnedProbs probs{current[0], current[1], current[2], current[3], theta1, theta2};
            if (std::fabs(probs.sum() - 1.0) > 1e-6) {
                throw NormalizationError("sign_binned_numeric: quadrant probabilities sum to " +
                                         std::to_string(probs.sum()));
            }
            return probs;
        }
        previous = current;
    }
    throw AccuracyError("sign_binned_numeric: quadrant integrals did not converge");
}

double PairCoherentProbDetail::max_imag_residue() const
{
    return std::max({std::fabs(w_pp.imag()), std::fabs(w_pm.imag()), std::fabs(w_mp.imag()),
                     std::fabs(w_mm.imag())});
}

PairCoherentProbDetail pair_coherent_probs(double r, double theta1, double theta2, const PairCoherentProbConfig& config)
{
    if (config.order < 16) throw ConfigError("pair_coherent_probs: order must be >= 16");
    if (!(r > 0.0)) throw DomainError("pair_coherent_probs: r must be > 0");
    // Quadrant integral over X_j of e^{-(X - beta)^2} gives (sqrt(pi)/2)(1 +/- erf beta),
    // leaving a double angular integral with
    //   beta1 = r/sqrt2 (e^{i(phi1 - phi0)} + e^{i(phi2 + phi0)}),
    //   beta2 = r/sqrt2 (e^{-i(phi1 + phi0)} + e^{-i(phi2 - phi0)}).
    const double phi0 = 0.5 * (theta1 + theta2);
    const int m = config.order;
    const double h = 2.0 * kPi / m;
    const double c = r / kSqrt2;
    std::vector<cd> e(m);
    for (int j = 0; j < m; ++j) e[j] = std::polar(1.0, h * j);
    const cd ep = std::polar(1.0, phi0);

    cd s0 = 0.0, s1 = 0.0, s2 = 0.0, s12 = 0.0;
    for (int j = 0; j < m; ++j) {
        for (int l = 0; l < m; ++l) {
            const cd e1 = e[j];
            const cd e2 = e[l];
            const double weight = std::exp(2.0 * r * r * std::cos(h * (j + l)));
            const cd beta1 = c * (e1 / ep + e2 * ep);
            const cd beta2 = c * (std::conj(e1) / ep + std::conj(e2) * ep);
            const cd f1 = erf_complex(beta1);
            const cd f2 = erf_complex(beta2);
            s0 += weight;
            s1 += weight * f1;
            s2 += weight * f2;
            s12 += weight * f1 * f2;
        }
    }
    // N^2 e^{-2r^2} / 4 * h^2 = h^2 / (16 pi^2 I0(2 r^2))
    const double pref = h * h / (16.0 * kPi * kPi * bessel_i0(2.0 * r * r));
    auto quadrant = [&](double sign1, double sign2) { return pref * (s0 + sign1 * s1 + sign2 * s2 + sign1 * sign2 * s12); };
    return {quadrant(1, 1), quadrant(1, -1), quadrant(-1, 1), quadrant(-1, -1)};
}

namespace {

// H_{n-1}(0)^2 / (pi 2^n n!)
double fock_pair_amplitude(int n)
{
    if ((n - 1) % 2 != 0) return 0.0;
    const int m = (n - 1) / 2;
    const double log_h = std::lgamma(2.0 * m + 1.0) - std::lgamma(m + 1.0);
    return std::exp(2.0 * log_h - n * std::log(2.0) - std::lgamma(n + 1.0)) / kPi;
}

} // namespace

SignBinnedProbs sign_binned_closed_form(const TwoModeState& state, double theta1, double theta2,
                                        const PairCoherentProbConfig& config)
{
    SignBinnedProbs p;
    p.theta1 = theta1;
    p.theta2 = theta2;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                const auto g = gaussian_tomogram_params(s.squeezing(), theta1 + theta2);
                const double shift = 2.0 * std::atan(g.b / g.N);
                p.w_pp = p.w_mm = (kPi - shift) / (4.0 * kPi);
                p.w_pm = p.w_mp = (kPi + shift) / (4.0 * kPi);
            } else if constexpr (std::is_same_v<T, FockPairSuperposition>) {
                const double delta = fock_pair_amplitude(s.n) * std::cos(s.n * (theta1 + theta2));
                p.w_pp = p.w_mm = 0.25 + delta;
                p.w_pm = p.w_mp = 0.25 - delta;
            } else if constexpr (std::is_same_v<T, PairCoherent>) {
                const auto d = pair_coherent_probs(s.r, theta1, theta2, config);
                p.w_pp = d.w_pp.real();
                p.w_pm = d.w_pm.real();
                p.w_mp = d.w_mp.real();
                p.w_mm = d.w_mm.real();
            } else {
                throw UnsupportedStateError("sign_binned_closed_form: no closed form for explicit Fock states");
            }
        },
        state.variant());
    return p;
}

} // namespace tomobell
