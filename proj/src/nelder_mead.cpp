#include "tomobell/nelder_mead.hpp"

#include "tomobell/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>
#include <mutex>

namespace tomobell {

namespace {

struct Objective {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> x;
    int evaluations = 0;
    bool bad = false;
};

// GSL calls back through C, so errors are recorded here and raised after the step returns.
double trampoline(const gsl_vector* v, void* params)
{
    auto* obj = static_cast<Objective*>(params);
    for (std::size_t i = 0; i < obj->x.size(); ++i) obj->x[i] = gsl_vector_get(v, i);
    ++obj->evaluations;
    double value = GSL_NAN;
    try {
        value = (*obj->f)(obj->x);
    } catch (...) {
        obj->bad = true;
        return GSL_NAN;
    }
    if (!std::isfinite(value)) obj->bad = true;
    return value;
}

struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadConfig& config)
{
    const std::size_t n = x0.size();
    if (n == 0) throw ConfigError("nelder_mead: empty starting point");
    static std::once_flag handler_off;
    std::call_once(handler_off, [] { gsl_set_error_handler_off(); });

    Objective obj{&f, std::vector<double>(n)};
    gsl_multimin_function fn{&trampoline, n, &obj};
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
    gsl_vector_set_all(step.get(), config.initial_step);
    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));

    auto fail_if_bad = [&] {
        if (obj.bad) throw AccuracyError("nelder_mead: objective returned a non-finite value");
    };
    const int init = gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());
    fail_if_bad();
    if (init != GSL_SUCCESS) throw AccuracyError(std::string("nelder_mead: ") + gsl_strerror(init));

    bool converged = false;
    while (obj.evaluations < config.max_evaluations) {
        const int status = gsl_multimin_fminimizer_iterate(m.get());
        fail_if_bad();
        if (status != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), config.x_tolerance) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }

    const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
    std::vector<double> xb(n);
    for (std::size_t i = 0; i < n; ++i) xb[i] = gsl_vector_get(best, i);
    return {xb, gsl_multimin_fminimizer_minimum(m.get()), obj.evaluations, converged};
}

} // namespace tomobell
