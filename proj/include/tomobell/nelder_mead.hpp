#pragma once

#include <functional>
#include <vector>

namespace tomobell {

struct NelderMeadConfig {
    double initial_step = 0.2;
    double x_tolerance = 1e-10;  ///< characteristic simplex size
    int max_evaluations = 20000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int evaluations;
    bool converged;
};

/// Minimizes f from x0 with the GSL simplex minimizer (nmsimplex2).  Deterministic;
/// throws AccuracyError if f returns a non-finite value.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadConfig& config = {});

} // namespace tomobell
