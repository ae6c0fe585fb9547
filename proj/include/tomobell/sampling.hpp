#pragma once

#include "tomobell/bell.hpp"
#include "tomobell/states.hpp"
#include "tomobell/tomography.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tomobell {

// Random numbers come from std::mt19937_64.  A batch seeded with s draws from an
// engine initialized with splitmix64(s); setting k of a multi-setting run uses the
// batch seed substream_seed(s, k).  Normal and uniform variates use the standard
// library distributions, so batches are bit-stable on one toolchain.

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `index` derived from a master seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

std::mt19937_64 make_engine(std::uint64_t seed);

struct SampleBatch {
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::vector<std::array<double, 2>> pairs;
    std::uint64_t seed = 0;
    std::string state;
    double acceptance_rate = 1.0;
};

/// Exact draws from the squeezed-vacuum tomogram (hbar = 1/2 scale): a bivariate Gaussian
/// with precision matrix 4 [[a, b], [b, a]].  Throws DomainError for count < 1.
SampleBatch sample_gaussian_epr(double s, double theta1, double theta2, std::size_t count, std::uint64_t seed);

/// Product-Gaussian proposal N(0, sigma1^2) x N(0, sigma2^2) scaled by bound.
struct Envelope {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double bound = 1.0; ///< M with tomogram <= M * proposal density
};

/// Envelope for a tomogram at fixed angles: proposal widths are `inflation` times the
/// tomogram's marginal RMS, and M is 1.05 times the largest density ratio on a scan grid.
Envelope default_envelope(const JointDensity& tomogram, double inflation = 1.5);

/// Rejection sampling from an arbitrary joint density.  Throws EnvelopeError carrying the
/// offending point if the density ever exceeds M times the proposal.
SampleBatch sample_rejection(const JointDensity& tomogram, double theta1, double theta2, std::size_t count,
                             std::uint64_t seed, const Envelope& envelope);

/// Dispatches to the exact Gaussian sampler for the squeezed vacuum and to rejection
/// sampling with the default envelope otherwise.
SampleBatch sample_state(const TwoModeState& state, double theta1, double theta2, std::size_t count,
                         std::uint64_t seed, double inflation = 1.5);

struct EstimatedProbs {
    SignBinnedProbs probs;
    double se_pp = 0.0;
    double se_pm = 0.0;
    double se_mp = 0.0;
    double se_mm = 0.0;
    std::size_t count = 0;
};

/// Quadrant frequencies with binomial standard errors; X = 0 counts as +.
/// Throws DomainError for an empty batch.
EstimatedProbs estimate_probs(const SampleBatch& batch);

struct ChshEstimate {
    double value;
    double standard_error;
    std::array<double, 4> correlations; ///< E(a,b), E(a,b'), E(a',b), E(a',b')
    std::array<double, 4> correlation_errors;
};

/// Four independent batches (substreams 0..3 of seed), var(E) = (1 - E^2) / count,
/// errors combined in quadrature.
ChshEstimate estimate_chsh(const TwoModeState& state, const BellAnglesQuadrature& angles, std::size_t count,
                           std::uint64_t seed);

} // namespace tomobell
