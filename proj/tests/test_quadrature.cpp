#include "mspde/basis.hpp"
#include "mspde/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace mspde;

TEST_CASE("gauss rules integrate monomials exactly up to degree 2n-1")
{
    for (int n = 1; n <= 9; ++n) {
        const QuadratureRule rule = gauss_legendre(n);
        REQUIRE(rule.size() == static_cast<std::size_t>(n));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double value = rule.integrate([k](double x) { return std::pow(x, k); });
            CHECK(value == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("gauss rule with one point is the midpoint rule")
{
    const QuadratureRule rule = gauss_legendre(1);
    CHECK(rule.points[0] == doctest::Approx(0.5));
    CHECK(rule.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("gauss rule rejects fewer than one point")
{
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("quadrature policy picks the smallest exact rule and caps it")
{
    CHECK(quadrature_order_policy(0) == 1);
    CHECK(quadrature_order_policy(1) == 1);
    CHECK(quadrature_order_policy(2) == 2);
    CHECK(quadrature_order_policy(5) == 3);
    CHECK(quadrature_order_policy(16) == kCappedQuadraturePoints);
    CHECK(quadrature_order_policy(40) == kCappedQuadraturePoints);
    CHECK(quadrature_order_policy(-1) == kCappedQuadraturePoints);
}

TEST_CASE("lagrange basis is nodal and sums to one")
{
    for (int r = 0; r <= 4; ++r) {
        const LagrangeBasis basis(r);
        for (int i = 0; i < basis.size(); ++i)
            for (int j = 0; j < basis.size(); ++j)
                CHECK(basis.eval(j, basis.nodes()[i]) == doctest::Approx(i == j ? 1.0 : 0.0));
        for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
            double sum = 0.0, dsum = 0.0;
            for (int j = 0; j < basis.size(); ++j) {
                sum += basis.eval(j, x);
                dsum += basis.eval(j, x, 1);
            }
            CHECK(sum == doctest::Approx(1.0));
            CHECK(dsum == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("lagrange derivative of x^2 interpolant")
{
    const LagrangeBasis basis(2);
    double d = 0.0;
    for (int j = 0; j < 3; ++j)
        d += basis.nodes()[j] * basis.nodes()[j] * basis.eval(j, 0.3, 1);
    CHECK(d == doctest::Approx(0.6));
}

TEST_CASE("degree zero basis sits at the midpoint")
{
    const LagrangeBasis basis(0);
    CHECK(basis.nodes()[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(basis.eval(1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(basis.eval(0, 0.2, 2), std::invalid_argument);
}
