#pragma once

#include "mspde/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mspde {

/// K z_t + L z_x = grad S(z) on a periodic interval, with constant
/// skew-symmetric K and L.
struct MultisymplecticProblem
{
    std::string label;
    int dimension = 0;
    Matrix K;
    Matrix L;
    std::vector<std::string> component_names;

    std::function<double(const State&)> hamiltonian;
    std::function<State(const State&)> gradient;
    std::function<StateMatrix(const State&)> hessian;

    /// Polynomial degree of grad S in z; drives the quadrature policy.
    int gradient_degree = 1;
    double domain_length = 1.0;

    std::optional<std::function<State(double t, double x)>> exact_solution;
    /// Data projected at t = 0. Equals the exact solution when one exists.
    std::function<State(double x)> initial_condition;

    /// Wave potential V(u) for the energy-stability monitor; empty for
    /// problems that are not of wave type.
    std::function<double(double)> wave_potential;

    bool linear() const { return gradient_degree <= 1; }
};

/// u_tt = u_xx as (u, v, w) with v = u_t, w = u_x; harmonic-wave exact
/// solution on [0, 1).
MultisymplecticProblem linear_wave();

/// u_tt = u_xx - u^3 (potential u^4/4), started from the harmonic wave.
MultisymplecticProblem nonlinear_wave();

/// Cubic Schroedinger equation in real form (u, v, p, q) on [0, 40) with the
/// amplitude-2 standing soliton.
MultisymplecticProblem nls();

/// "linear-wave", "nonlinear-wave" or "nls". Throws std::invalid_argument.
MultisymplecticProblem problem_by_label(const std::string& label);

struct ValidationCheck
{
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
};

struct ValidationReport
{
    std::vector<ValidationCheck> checks;
    bool passed() const;
};

/// Skew-symmetry, gradient/Hessian consistency against finite differences
/// and, when present, the exact solution's PDE residual.
ValidationReport validate(const MultisymplecticProblem& problem, unsigned seed = 1);

} // namespace mspde
