#include "tomobell/quadrature.hpp"

#include "tomobell/errors.hpp"
#include "tomobell/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace tomobell {

namespace {

struct ReferenceRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
ReferenceRule legendre_reference(int n)
{
    ReferenceRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

const ReferenceRule& cached_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, ReferenceRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, legendre_reference(n)).first;
    return it->second;
}

void check_interval(double a, double b)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        throw DomainError("make_quadrature: invalid interval [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
}

} // namespace

QuadratureRule make_quadrature(QuadratureKind kind, int order, double a, double b)
{
    if (order < 2) throw DomainError("make_quadrature: order must be >= 2");
    check_interval(a, b);

    QuadratureRule rule{kind, a, b, {}, {}};
    rule.nodes.resize(order);
    rule.weights.resize(order);
    if (kind == QuadratureKind::GaussLegendre) {
        const ReferenceRule& ref = cached_legendre(order);
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (int i = 0; i < order; ++i) {
            rule.nodes[i] = mid + half * ref.nodes[i];
            rule.weights[i] = half * ref.weights[i];
        }
    } else {
        const double h = (b - a) / order;
        for (int i = 0; i < order; ++i) {
            rule.nodes[i] = a + h * i;
            rule.weights[i] = h;
        }
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(int order, int panels, double a, double b)
{
    if (panels < 1) throw DomainError("composite_gauss_legendre: panels must be >= 1");
    check_interval(a, b);
    QuadratureRule rule{QuadratureKind::GaussLegendre, a, b, {}, {}};
    rule.nodes.reserve(static_cast<std::size_t>(order) * panels);
    rule.weights.reserve(static_cast<std::size_t>(order) * panels);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const QuadratureRule panel = gauss_legendre(order, a + p * width, a + (p + 1) * width);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

} // namespace tomobell
