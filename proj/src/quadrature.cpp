#include "mspde/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mspde {

namespace {

// P_n(x) and P_n'(x) on [-1,1] by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0)
        return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace

QuadratureRule gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need at least one point, got " +
                                    std::to_string(n));

    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.points[0] = 0.5;
        rule.weights[0] = 1.0;
        return rule;
    }

    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; store ascending on [0,1].
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.points[i] = 0.5 * (1.0 - x);
        rule.weights[n - 1 - i] = 0.5 * w;
        rule.weights[i] = 0.5 * w;
    }
    if (n % 2 == 1)
        rule.points[n / 2] = 0.5;
    return rule;
}

int quadrature_order_policy(int max_integrand_degree)
{
    if (max_integrand_degree < 0)
        return kCappedQuadraturePoints;
    const int n = (max_integrand_degree + 2) / 2;
    return std::max(1, std::min(n, kCappedQuadraturePoints));
}

QuadratureRule policy_rule(int max_integrand_degree)
{
    return gauss_legendre(quadrature_order_policy(max_integrand_degree));
}

} // namespace mspde
