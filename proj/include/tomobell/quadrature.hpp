#pragma once

#include <vector>

namespace tomobell {

enum class QuadratureKind {
    GaussLegendre,     ///< exact for polynomials of degree <= 2*order - 1 on [a, b]
    PeriodicTrapezoid, ///< exact for trigonometric polynomials of degree <= order - 1 over one period [a, b)
};

/// An immutable set of nodes and weights on [a, b].
struct QuadratureRule {
    QuadratureKind kind;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    auto integrate(F&& f) const
    {
        decltype(f(nodes[0])) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Builds a rule of the given kind with `order` nodes.
/// Throws DomainError for order < 2 or an empty/non-finite interval.
QuadratureRule make_quadrature(QuadratureKind kind, int order, double a, double b);

inline QuadratureRule gauss_legendre(int order, double a, double b)
{
    return make_quadrature(QuadratureKind::GaussLegendre, order, a, b);
}

inline QuadratureRule periodic_trapezoid(int order, double a, double b)
{
    return make_quadrature(QuadratureKind::PeriodicTrapezoid, order, a, b);
}

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
QuadratureRule composite_gauss_legendre(int order, int panels, double a, double b);

} // namespace tomobell
