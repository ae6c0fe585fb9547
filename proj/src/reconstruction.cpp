#include "tomobell/reconstruction.hpp"

#include "tomobell/errors.hpp"
#include "tomobell/quadrature.hpp"
#include "tomobell/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tomobell {

namespace {

double grid_step(const std::vector<double>& v, const char* name)
{
    if (v.size() < 2) throw ConfigError(std::string(name) + " grid needs at least two points");
    const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    if (!(h > 0.0)) throw ConfigError(std::string(name) + " grid must be increasing");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::fabs(v[i] - v[i - 1] - h) > 1e-9 * std::max(1.0, std::fabs(h))) {
            throw ConfigError(std::string(name) + " grid must be regular");
        }
    }
    return h;
}

std::vector<double> trapezoid_weights(const std::vector<double>& v, double h)
{
    std::vector<double> w(v.size(), h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

double log_factorial(int n)
{
    return std::lgamma(n + 1.0);
}

} // namespace

TomogramSamples TomogramSamples::sample(const SingleModeTomogram& tomogram, double x_half_width,
                                        int x_points, int theta_points)
{
    if (x_points < 2 || theta_points < 1 || !(x_half_width > 0.0)) {
        throw ConfigError("tomogram sampling needs x_points >= 2, theta_points >= 1, positive width");
    }
    TomogramSamples s;
    s.x.resize(x_points);
    for (int i = 0; i < x_points; ++i) s.x[i] = -x_half_width + 2.0 * x_half_width * i / (x_points - 1);
    s.theta.resize(theta_points);
    for (int j = 0; j < theta_points; ++j) s.theta[j] = kPi * j / theta_points;
    s.values.resize(theta_points, x_points);
    for (int j = 0; j < theta_points; ++j)
        for (int i = 0; i < x_points; ++i) s.values(j, i) = tomogram(s.x[i], s.theta[j]);
    return s;
}

WignerGrid inverse_fourier_wigner(const TomogramSamples& samples, const std::vector<double>& q,
                                  const std::vector<double>& p, const FourierInversionConfig& config)
{
    const double hx = grid_step(samples.x, "X");
    const double hq = grid_step(q, "q");
    const double hp = grid_step(p, "p");
    const auto n_theta = static_cast<long>(samples.theta.size());
    if (n_theta < 1 || samples.values.rows() != n_theta ||
        samples.values.cols() != static_cast<long>(samples.x.size())) {
        throw ConfigError("tomogram samples: values must be theta x X");
    }
    if (!(config.k_max > 0.0) || !(config.window > 0.0) || config.k_nodes < 2) {
        throw ConfigError("inverse Fourier: k_max and window must be positive, k_nodes >= 2");
    }
    const double k_alias = kPi / hx;
    if (config.k_max > k_alias) {
        throw ConfigError("inverse Fourier: k_max exceeds the X-grid Nyquist limit pi/dX = " +
                          std::to_string(k_alias));
    }

    const std::vector<double> wx = trapezoid_weights(samples.x, hx);
    const QuadratureRule kr = gauss_legendre(config.k_nodes, 0.0, config.k_max);
    const double dtheta = kPi / static_cast<double>(n_theta);

    // chi(+k) and chi(-k) are kept separately; for real input they are conjugate and the
    // imaginary part of W is pure round-off.
    const std::size_t nk = kr.size();
    std::vector<cd> chi_pos(n_theta * nk), chi_neg(n_theta * nk);
    for (long j = 0; j < n_theta; ++j) {
        for (std::size_t m = 0; m < nk; ++m) {
            const double k = kr.nodes[m];
            cd pos{}, neg{};
            for (std::size_t i = 0; i < samples.x.size(); ++i) {
                const double w = wx[i] * samples.values(j, static_cast<long>(i));
                const cd ph = std::polar(1.0, k * samples.x[i]);
                pos += w * ph;
                neg += w * std::conj(ph);
            }
            const double filter = kr.weights[m] * k * std::exp(-k * k / (2.0 * config.window * config.window));
            chi_pos[j * nk + m] = filter * pos;
            chi_neg[j * nk + m] = filter * neg;
        }
    }

    WignerGrid out;
    out.q = q;
    out.p = p;
    out.values.resize(static_cast<long>(q.size()), static_cast<long>(p.size()));
    out.max_imag_residue = 0.0;
    const double norm = dtheta / (4.0 * kPi * kPi);
    for (std::size_t a = 0; a < q.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
            cd sum{};
            for (long j = 0; j < n_theta; ++j) {
                const double proj = q[a] * std::cos(samples.theta[j]) + p[b] * std::sin(samples.theta[j]);
                for (std::size_t m = 0; m < nk; ++m) {
                    const cd ph = std::polar(1.0, -kr.nodes[m] * proj);
                    sum += chi_pos[j * nk + m] * ph + chi_neg[j * nk + m] * std::conj(ph);
                }
            }
            sum *= norm;
            out.values(static_cast<long>(a), static_cast<long>(b)) = sum.real();
            out.max_imag_residue = std::max(out.max_imag_residue, std::fabs(sum.imag()));
        }
    }

    const std::vector<double> wq = trapezoid_weights(q, hq);
    const std::vector<double> wp = trapezoid_weights(p, hp);
    out.integral = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < p.size(); ++b)
            out.integral += wq[a] * wp[b] * out.values(static_cast<long>(a), static_cast<long>(b));
    if (std::fabs(out.integral - 1.0) > 0.05) {
        throw AccuracyError("inverse Fourier: reconstructed Wigner integrates to " +
                            std::to_string(out.integral) + " over the requested grid");
    }
    return out;
}

std::vector<cd> displacement_matrix(cd beta, int cutoff)
{
    if (cutoff < 1) throw DomainError("displacement_matrix: cutoff must be >= 1");
    const double x = std::norm(beta);
    const double gauss = std::exp(-0.5 * x);
    std::vector<cd> d(static_cast<std::size_t>(cutoff) * cutoff);
    for (int m = 0; m < cutoff; ++m) {
        for (int n = 0; n < cutoff; ++n) {
            const int lo = std::min(m, n);
            const int diff = std::abs(m - n);
            const double scale = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + diff)));
            const cd base = m >= n ? beta : -std::conj(beta);
            d[static_cast<std::size_t>(m) * cutoff + n] =
                scale * std::pow(base, diff) * gauss * laguerre(lo, diff, x);
        }
    }
    return d;
}

KernelReconstruction kernel_reconstruct_density(const SingleModeTomogram& tomogram, int cutoff,
                                                const KernelConfig& config)
{
    if (cutoff < 1 || cutoff > 10) throw DomainError("kernel reconstruction: cutoff must be in [1, 10]");
    if (config.extrapolation_levels < 2 || !(config.regularizer > 0.0) || config.theta_nodes < 2 ||
        config.k_nodes < 2 || config.x_nodes < 2 || !(config.k_max > 0.0) || !(config.x_half_width > 0.0)) {
        throw ConfigError("kernel reconstruction: invalid integration configuration");
    }

    const QuadratureRule xr = gauss_legendre(config.x_nodes, -config.x_half_width, config.x_half_width);
    const QuadratureRule kr = gauss_legendre(config.k_nodes, 0.0, config.k_max);
    const QuadratureRule tr = periodic_trapezoid(config.theta_nodes, 0.0, 2.0 * kPi);
    const int levels = config.extrapolation_levels;
    const std::size_t n2 = static_cast<std::size_t>(cutoff) * cutoff;

    std::vector<double> eps(levels);
    for (int l = 0; l < levels; ++l) eps[l] = config.regularizer / std::pow(2.0, l);

    // One pass over (theta, k) accumulates every regularization level at once.
    std::vector<std::vector<cd>> rho(levels, std::vector<cd>(n2));
    std::vector<double> w_line(xr.size());
    for (std::size_t t = 0; t < tr.size(); ++t) {
        const double theta = tr.nodes[t];
        for (std::size_t i = 0; i < xr.size(); ++i) w_line[i] = xr.weights[i] * tomogram(xr.nodes[i], theta);
        for (std::size_t m = 0; m < kr.size(); ++m) {
            const double k = kr.nodes[m];
            cd chi{};
            for (std::size_t i = 0; i < xr.size(); ++i) chi += w_line[i] * std::polar(1.0, k * xr.nodes[i]);
            const cd beta = cd(0.0, -k / kSqrt2) * std::polar(1.0, theta);
            const std::vector<cd> d = displacement_matrix(beta, cutoff);
            const double base = tr.weights[t] * kr.weights[m] * k / (2.0 * kPi);
            for (int l = 0; l < levels; ++l) {
                const cd c = base * std::exp(-eps[l] * k * k) * chi;
                for (std::size_t e = 0; e < n2; ++e) rho[l][e] += c * d[e];
            }
        }
    }

    // Neville table in eps with ratio 2: T[l][j] removes the eps^j error term.
    std::vector<std::vector<std::vector<cd>>> table(levels);
    for (int l = 0; l < levels; ++l) {
        table[l].push_back(rho[l]);
        for (int j = 1; j <= l; ++j) {
            const double f = std::pow(2.0, j) - 1.0;
            std::vector<cd> next(n2);
            for (std::size_t e = 0; e < n2; ++e)
                next[e] = table[l][j - 1][e] + (table[l][j - 1][e] - table[l - 1][j - 1][e]) / f;
            table[l].push_back(std::move(next));
        }
    }
    const std::vector<cd>& best = table[levels - 1][levels - 1];
    const std::vector<cd>& prev = table[levels - 2][levels - 2];
    double change = 0.0;
    for (std::size_t e = 0; e < n2; ++e) change = std::max(change, std::abs(best[e] - prev[e]));
    if (!(change <= config.tolerance)) {
        throw AccuracyError("kernel reconstruction: Richardson extrapolation did not settle (change " +
                            std::to_string(change) + " > tolerance " + std::to_string(config.tolerance) +
                            ", largest regularizer " + std::to_string(config.regularizer) + ", " +
                            std::to_string(levels) + " levels)");
    }

    std::vector<Eigen::Triplet<cd, long>> triplets;
    double trace = 0.0;
    for (int m = 0; m < cutoff; ++m) {
        for (int n = 0; n < cutoff; ++n) {
            const cd v = best[static_cast<std::size_t>(m) * cutoff + n];
            if (v != cd{}) triplets.emplace_back(m, n, v);
        }
        trace += best[static_cast<std::size_t>(m) * cutoff + m].real();
    }
    DensityMatrix::Sparse sp(cutoff, cutoff);
    sp.setFromTriplets(triplets.begin(), triplets.end());
    return {DensityMatrix(cutoff, 1, std::move(sp), 1.0 - trace), eps, change};
}

} // namespace tomobell
