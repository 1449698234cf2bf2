#include "mspde/fem_spaces.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace mspde;

TEST_CASE("uniform periodic partition locates points with wrapping")
{
    const Partition1D mesh = Partition1D::uniform(1.0, 4, true);
    CHECK(mesh.element_count() == 4);
    CHECK(mesh.total_length() == doctest::Approx(1.0));
    const auto [m, xi] = mesh.locate(0.6);
    CHECK(m == 2);
    CHECK(xi == doctest::Approx(0.4));
    const auto [mw, xiw] = mesh.locate(1.1);
    CHECK(mw == 0);
    CHECK(xiw == doctest::Approx(0.4));
    CHECK_THROWS_AS(Partition1D::uniform(1.0, 0, true), std::invalid_argument);
    CHECK_THROWS_AS(Partition1D::uniform(-1.0, 4, true), std::invalid_argument);
}

TEST_CASE("dof counts of continuous and discontinuous spaces")
{
    const Partition1D mesh = Partition1D::uniform(1.0, 5, true);
    CHECK(SpatialSpace(mesh, 2, Continuity::Continuous).dof_count() == 10);
    CHECK(SpatialSpace(mesh, 2, Continuity::Discontinuous).dof_count() == 15);
    const SpatialSpace cg(mesh, 1, Continuity::Continuous);
    CHECK(cg.dof(4, 1) == cg.dof(0, 0));
}

TEST_CASE("continuous p=1 mass matrix is the periodic circulant h/6 (1 4 1)")
{
    const double h = 0.25;
    const SpatialSpace space(Partition1D::uniform(1.0, 4, true), 1, Continuity::Continuous);
    const Matrix mass = Matrix(space.mass_matrix());
    for (int i = 0; i < 4; ++i) {
        CHECK(mass(i, i) == doctest::Approx(4.0 * h / 6.0));
        CHECK(mass(i, (i + 1) % 4) == doctest::Approx(h / 6.0));
        CHECK(mass(i, (i + 3) % 4) == doctest::Approx(h / 6.0));
        CHECK(mass(i, (i + 2) % 4) == doctest::Approx(0.0));
    }
}

TEST_CASE("mass matrix integrates the constant one")
{
    for (auto continuity : {Continuity::Continuous, Continuity::Discontinuous})
        for (int p = 1; p <= 3; ++p) {
            const SpatialSpace space(Partition1D::uniform(2.0, 6, true), p, continuity);
            const Vector ones = Vector::Ones(space.dof_count());
            CHECK(ones.dot(space.mass_matrix() * ones) == doctest::Approx(2.0));
        }
}

TEST_CASE("L2 projection reproduces polynomials in the space")
{
    const SpatialSpace space(Partition1D::uniform(1.0, 4, true), 2, Continuity::Discontinuous);
    const Vector c = l2_project_spatial(space, 1, [](double x) {
        State s(1);
        s << 3.0 * x * x - x + 0.5;
        return s;
    }, 2);
    for (double x : {0.05, 0.3, 0.61, 0.99})
        CHECK(space.value_at(c, x) == doctest::Approx(3.0 * x * x - x + 0.5));
}

TEST_CASE("L2 projection of a periodic smooth function converges")
{
    auto error = [](int M) {
        const SpatialSpace space(Partition1D::uniform(1.0, M, true), 1, Continuity::Continuous);
        const Vector c = l2_project_spatial(space, 1, [](double x) {
            State s(1);
            s << std::sin(2.0 * M_PI * x);
            return s;
        });
        double e = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = (i + 0.5) / 200.0;
            e = std::max(e, std::abs(space.value_at(c, x) - std::sin(2.0 * M_PI * x)));
        }
        return e;
    };
    CHECK(error(32) < error(16) / 3.0);
}

TEST_CASE("temporal slab bases and reference time")
{
    const TemporalSlab slab(1.0, 1.5, 1);
    CHECK(slab.trial_nodes() == 3);
    CHECK(slab.test_size() == 2);
    CHECK(slab.reference_time(1.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(slab.reference_time(2.0), std::invalid_argument);
}

TEST_CASE("slab coefficients store nodes component-major")
{
    SlabCoefficients z(2, 3, 2);
    Vector s(6);
    s << 1, 2, 3, 4, 5, 6;
    z.set_node_state(1, s);
    CHECK(z(1, 2, 1) == 6.0);
    CHECK(z(0, 0, 0) == 0.0);
    CHECK(z.node_state(1) == s);
}
