#include "tomobell/sampling.hpp"

#include "tomobell/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace tomobell {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

std::mt19937_64 make_engine(std::uint64_t seed)
{
    return std::mt19937_64(splitmix64(seed));
}

SampleBatch sample_gaussian_epr(double s, double theta1, double theta2, std::size_t count, std::uint64_t seed)
{
    if (count < 1) throw DomainError("sample_gaussian_epr: count must be >= 1");
    const auto g = gaussian_tomogram_params(s, theta1 + theta2);
    if (!(std::fabs(g.b) < g.a)) throw DomainError("sample_gaussian_epr: |b| >= a, covariance not positive definite");

    Eigen::Matrix2d precision;
    precision << 4.0 * g.a, 4.0 * g.b, 4.0 * g.b, 4.0 * g.a;
    const Eigen::Matrix2d cov = precision.inverse();
    const Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success) throw DomainError("sample_gaussian_epr: covariance Cholesky failed");
    const Eigen::Matrix2d l = llt.matrixL();

    SampleBatch batch;
    batch.theta1 = theta1;
    batch.theta2 = theta2;
    batch.seed = seed;
    batch.state = TwoModeState::squeezed_vacuum_from_s(s).describe();
    batch.pairs.reserve(count);
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < count; ++i) {
        const double z1 = normal(engine);
        const double z2 = normal(engine);
        batch.pairs.push_back({l(0, 0) * z1, l(1, 0) * z1 + l(1, 1) * z2});
    }
    return batch;
}

namespace {

double gauss_density(double x, double sigma)
{
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
}

} // namespace

Envelope default_envelope(const JointDensity& tomogram, double inflation)
{
    if (!(inflation >= 1.0)) throw ConfigError("default_envelope: inflation must be >= 1");

    // Second moments on a coarse grid wide enough for every benchmark state.
    const int n = 161;
    const double half = 10.0;
    const double h = 2.0 * half / (n - 1);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x1 = -half + i * h;
        for (int j = 0; j < n; ++j) {
            const double x2 = -half + j * h;
            const double w = tomogram(x1, x2);
            m0 += w;
            m1 += w * x1 * x1;
            m2 += w * x2 * x2;
        }
    }
    if (!(m0 > 0.0)) throw ConfigError("default_envelope: tomogram vanishes on the scan grid");
    Envelope env;
    env.sigma1 = inflation * std::sqrt(m1 / m0);
    env.sigma2 = inflation * std::sqrt(m2 / m0);

    double ratio = 0.0;
    const int scan = 121;
    for (int i = 0; i < scan; ++i) {
        const double x1 = env.sigma1 * (-6.0 + 12.0 * i / (scan - 1));
        for (int j = 0; j < scan; ++j) {
            const double x2 = env.sigma2 * (-6.0 + 12.0 * j / (scan - 1));
            const double g = gauss_density(x1, env.sigma1) * gauss_density(x2, env.sigma2);
            ratio = std::max(ratio, tomogram(x1, x2) / g);
        }
    }
    env.bound = 1.05 * ratio;
    return env;
}

SampleBatch sample_rejection(const JointDensity& tomogram, double theta1, double theta2, std::size_t count,
                             std::uint64_t seed, const Envelope& envelope)
{
    if (count < 1) throw DomainError("sample_rejection: count must be >= 1");
    if (!(envelope.sigma1 > 0.0 && envelope.sigma2 > 0.0 && envelope.bound > 0.0)) {
        throw ConfigError("sample_rejection: envelope widths and bound must be positive");
    }
    SampleBatch batch;
    batch.theta1 = theta1;
    batch.theta2 = theta2;
    batch.seed = seed;
    batch.pairs.reserve(count);
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::size_t proposals = 0;
    while (batch.pairs.size() < count) {
        const double x1 = envelope.sigma1 * normal(engine);
        const double x2 = envelope.sigma2 * normal(engine);
        const double u = uniform(engine);
        ++proposals;
        const double g = gauss_density(x1, envelope.sigma1) * gauss_density(x2, envelope.sigma2);
        const double ratio = tomogram(x1, x2) / (envelope.bound * g);
        if (ratio > 1.0) {
            throw EnvelopeError("sample_rejection: tomogram exceeds the envelope by a factor " +
                                    std::to_string(ratio) + " at (" + std::to_string(x1) + ", " +
                                    std::to_string(x2) + ")",
                                x1, x2);
        }
        if (u < ratio) batch.pairs.push_back({x1, x2});
    }
    batch.acceptance_rate = static_cast<double>(count) / static_cast<double>(proposals);
    return batch;
}

SampleBatch sample_state(const TwoModeState& state, double theta1, double theta2, std::size_t count,
                         std::uint64_t seed, double inflation)
{
    if (const auto* sv = std::get_if<SqueezedVacuum>(&state.variant())) {
        return sample_gaussian_epr(sv->squeezing(), theta1, theta2, count, seed);
    }
    const JointDensity density = [&](double x1, double x2) {
        return tomogram_closed_form(state, x1, theta1, x2, theta2);
    };
    SampleBatch batch = sample_rejection(density, theta1, theta2, count, seed, default_envelope(density, inflation));
    batch.state = state.describe();
    return batch;
}

EstimatedProbs estimate_probs(const SampleBatch& batch)
{
    if (batch.pairs.empty()) throw DomainError("estimate_probs: empty batch");
    std::size_t pp = 0, pm = 0, mp = 0, mm = 0;
    for (const auto& x : batch.pairs) {
        const bool a = x[0] >= 0.0;
        const bool b = x[1] >= 0.0;
        if (a && b) ++pp;
        else if (a) ++pm;
        else if (b) ++mp;
        else ++mm;
    }
    const double m = static_cast<double>(batch.pairs.size());
    auto se = [m](double p) { return std::sqrt(p * (1.0 - p) / m); };
    EstimatedProbs e;
    e.count = batch.pairs.size();
    e.probs.theta1 = batch.theta1;
    e.probs.theta2 = batch.theta2;
    e.probs.w_pp = pp / m;
    e.probs.w_pm = pm / m;
    e.probs.w_mp = mp / m;
    e.probs.w_mm = mm / m;
    e.se_pp = se(e.probs.w_pp);
    e.se_pm = se(e.probs.w_pm);
    e.se_mp = se(e.probs.w_mp);
    e.se_mm = se(e.probs.w_mm);
    return e;
}

ChshEstimate estimate_chsh(const TwoModeState& state, const BellAnglesQuadrature& angles, std::size_t count,
                           std::uint64_t seed)
{
    const std::array<std::array<double, 2>, 4> settings{{{angles.theta1, angles.theta2},
                                                         {angles.theta1, angles.theta2p},
                                                         {angles.theta1p, angles.theta2},
                                                         {angles.theta1p, angles.theta2p}}};
    ChshEstimate out{};
    double variance = 0.0;
    for (std::size_t k = 0; k < settings.size(); ++k) {
        const SampleBatch batch = sample_state(state, settings[k][0], settings[k][1], count, substream_seed(seed, k));
        const EstimatedProbs p = estimate_probs(batch);
        const double e = p.probs.w_pp - p.probs.w_pm - p.probs.w_mp + p.probs.w_mm;
        out.correlations[k] = e;
        out.correlation_errors[k] = std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(count));
        variance += out.correlation_errors[k] * out.correlation_errors[k];
    }
    const auto& e = out.correlations;
    out.value = chsh(e[0], e[1], e[2], e[3]);
    out.standard_error = std::sqrt(variance);
    return out;
}

} // namespace tomobell
