#include "mspde/diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace mspde;

namespace {

Trajectory wave_run(Scheme s, int q, int p, double h, double T)
{
    SolverConfig c;
    c.q = q;
    c.p = p;
    c.dt = h;
    c.dx = h;
    c.final_time = T;
    return run_simulation(s, linear_wave(), c);
}

} // namespace

TEST_CASE("densities of the harmonic wave")
{
    const MultisymplecticProblem p = linear_wave();
    // At x = t = 0: u = 0, v = w = pi, u_x = w, v_x = w_x = 0.
    State z(3), dz(3), zt(3);
    z << 0.0, M_PI, M_PI;
    dz << M_PI, 0.0, 0.0;
    zt << M_PI, 0.0, 0.0;
    const FluxDensity f = densities_fluxes(p, z, dz, zt);
    CHECK(f.energy_density == doctest::Approx(-0.5 * M_PI * M_PI));
    CHECK(f.momentum_density == doctest::Approx(-0.5 * M_PI * M_PI));
}

TEST_CASE("eoc of halving errors")
{
    const std::vector<double> r = eoc({1.0, 0.25, 0.0625}, {0.1, 0.05, 0.025});
    REQUIRE(r.size() == 2u);
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(r[1] == doctest::Approx(2.0));
    const std::vector<double> z = eoc({1.0, 0.0}, {0.1, 0.05});
    CHECK(std::isnan(z[0]));
    CHECK_THROWS_AS(eoc({1.0, 0.5}, {0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("deviation and max_abs")
{
    const std::vector<double> d = deviation({2.0, 2.5, 1.0});
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.5);
    CHECK(d[2] == 1.0);
    CHECK(max_abs({-3.0, 2.0}) == 3.0);
}

TEST_CASE("initial invariants of the harmonic wave")
{
    const MultisymplecticProblem problem = linear_wave();
    const Trajectory tr = wave_run(Scheme::CgPrimary, 1, 3, 0.0625, 0.125);
    const TrajectoryFields f(problem, tr);
    const InvariantSeries s = global_invariants(f);
    CHECK(s.times.size() == 3u);
    CHECK(s.mass[0][0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(s.energy[0] == doctest::Approx(-0.5 * M_PI * M_PI).epsilon(1e-4));
}

TEST_CASE("energy and consistent momentum law hold per slab")
{
    for (Scheme s : {Scheme::CgPrimary, Scheme::DgPrimary}) {
        const MultisymplecticProblem problem = linear_wave();
        const Trajectory tr = wave_run(s, 1, 2, 0.125, 0.5);
        const TrajectoryFields f(problem, tr);
        const InvariantSeries series = global_invariants(f);
        for (const SlabLaw& law : slab_laws(f, series)) {
            CHECK(std::abs(law.energy_change) < 1e-12);
            CHECK(std::abs(law.momentum_residual) < 1e-12);
        }
    }
}

TEST_CASE("local conservation laws of the discontinuous scheme")
{
    SolverConfig c;
    c.q = 1;
    c.p = 2;
    c.dt = 0.1;
    c.dx = 0.125;
    c.final_time = 0.3;
    const MultisymplecticProblem problem = nonlinear_wave();
    const Trajectory tr = run_simulation(Scheme::DgPrimary, problem, c);
    const TrajectoryFields f(problem, tr);
    // The slab equations hold to the Newton tolerance, which bounds the balance.
    for (int n = 0; n < tr.slab_count(); ++n)
        for (int m = 0; m < tr.space->element_count(); ++m) {
            const LocalResidual r = local_conservation_residuals(f, n, m);
            CHECK(std::abs(r.energy) < 1e-10);
            CHECK(std::abs(r.momentum) < 1e-10);
        }
}

TEST_CASE("bochner error decreases under refinement")
{
    const Trajectory coarse = wave_run(Scheme::CgPrimary, 0, 1, 0.125, 0.5);
    const Trajectory fine = wave_run(Scheme::CgPrimary, 0, 1, 0.0625, 0.5);
    const MultisymplecticProblem problem = linear_wave();
    const double ec = bochner_error(TrajectoryFields(problem, coarse))[0];
    const double ef = bochner_error(TrajectoryFields(problem, fine))[0];
    CHECK(ef < ec);
}

TEST_CASE("bochner error needs an exact solution")
{
    MultisymplecticProblem p = nonlinear_wave();
    p.exact_solution.reset();
    SolverConfig c;
    c.dx = 0.25;
    c.final_time = 0.1;
    const Trajectory tr = run_simulation(Scheme::CgPrimary, p, c);
    CHECK_THROWS_AS(bochner_error(TrajectoryFields(p, tr)), std::invalid_argument);
}

TEST_CASE("auxiliary identity and stability monitor")
{
    for (Scheme s : {Scheme::CgPrimary, Scheme::DgPrimary}) {
        const MultisymplecticProblem problem = linear_wave();
        const Trajectory tr = wave_run(s, 1, 2, 0.125, 0.5);
        const TrajectoryFields f(problem, tr);
        CHECK(auxiliary_identity_residual(f) < 1e-10);
        const StabilityReport r = stability_monitor(f);
        CHECK(r.lhs.size() == tr.times.size());
        CHECK(r.max_slack() <= 1e-8);
    }
}

TEST_CASE("auxiliary identity rejects non-wave problems")
{
    SolverConfig c;
    c.dx = 4.0;
    c.final_time = 0.1;
    const MultisymplecticProblem problem = nls();
    const Trajectory tr = run_simulation(Scheme::CgPrimary, problem, c);
    CHECK_THROWS_AS(auxiliary_identity_residual(TrajectoryFields(problem, tr)), std::invalid_argument);
}
