#pragma once

#include <cstddef>
#include <vector>

namespace mspde {

/// Quadrature on the reference interval [0,1]. Weights sum to one.
struct QuadratureRule
{
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    template <class F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            sum += weights[i] * f(points[i]);
        return sum;
    }
};

/// Largest rule the quadrature policy hands out: nine Gauss points, i.e.
/// exact for polynomials of degree <= 17, the first rule whose exactness
/// reaches 16.
inline constexpr int kCappedQuadraturePoints = 9;

/// n-point Gauss-Legendre rule mapped to [0,1]. Throws std::invalid_argument
/// for n < 1.
QuadratureRule gauss_legendre(int n);

/// Number of Gauss points for an integrand of the given polynomial degree:
/// the smallest n with 2n-1 >= degree, capped at kCappedQuadraturePoints.
/// Pass a negative degree for a non-polynomial integrand to get the cap.
int quadrature_order_policy(int max_integrand_degree);

/// Rule chosen by quadrature_order_policy.
QuadratureRule policy_rule(int max_integrand_degree);

} // namespace mspde
