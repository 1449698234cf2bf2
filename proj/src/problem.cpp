#include "mspde/problem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mspde {

namespace {

constexpr double pi = std::numbers::pi;

Matrix wave_K()
{
    Matrix K = Matrix::Zero(3, 3);
    K(0, 1) = -1.0;
    K(1, 0) = 1.0;
    return K;
}

Matrix wave_L()
{
    Matrix L = Matrix::Zero(3, 3);
    L(0, 2) = 1.0;
    L(2, 0) = -1.0;
    return L;
}

State harmonic_wave(double t, double x)
{
    State z(3);
    const double phase = 2.0 * pi * (x + t);
    z << 0.5 * std::sin(phase), pi * std::cos(phase), pi * std::cos(phase);
    return z;
}

MultisymplecticProblem wave(std::string label, bool cubic)
{
    MultisymplecticProblem p;
    p.label = std::move(label);
    p.dimension = 3;
    p.K = wave_K();
    p.L = wave_L();
    p.component_names = {"u", "v", "w"};
    p.domain_length = 1.0;
    p.gradient_degree = cubic ? 3 : 1;
    const double c = cubic ? 1.0 : 0.0;
    p.hamiltonian = [c](const State& z) {
        return 0.5 * z[1] * z[1] - 0.5 * z[2] * z[2] + 0.25 * c * std::pow(z[0], 4);
    };
    p.gradient = [c](const State& z) {
        State g(3);
        g << c * z[0] * z[0] * z[0], z[1], -z[2];
        return g;
    };
    p.hessian = [c](const State& z) {
        StateMatrix h = StateMatrix::Zero(3, 3);
        h(0, 0) = 3.0 * c * z[0] * z[0];
        h(1, 1) = 1.0;
        h(2, 2) = -1.0;
        return h;
    };
    p.wave_potential = [c](double u) { return 0.25 * c * u * u * u * u; };
    p.initial_condition = [](double x) { return harmonic_wave(0.0, x); };
    return p;
}

// Nearest periodic image of x in [-L/2, L/2).
double centred(double x, double length)
{
    double y = std::fmod(x + 0.5 * length, length);
    if (y < 0.0)
        y += length;
    return y - 0.5 * length;
}

} // namespace

MultisymplecticProblem linear_wave()
{
    auto p = wave("linear-wave", false);
    p.exact_solution = harmonic_wave;
    return p;
}

MultisymplecticProblem nonlinear_wave()
{
    return wave("nonlinear-wave", true);
}

MultisymplecticProblem nls()
{
    MultisymplecticProblem p;
    p.label = "nls";
    p.dimension = 4;
    p.K = Matrix::Zero(4, 4);
    p.K(0, 1) = -1.0;
    p.K(1, 0) = 1.0;
    p.L = Matrix::Zero(4, 4);
    p.L(0, 2) = 1.0;
    p.L(1, 3) = 1.0;
    p.L(2, 0) = -1.0;
    p.L(3, 1) = -1.0;
    p.component_names = {"u", "v", "p", "q"};
    p.domain_length = 40.0;
    p.gradient_degree = 3;

    // The 1/8 coefficient makes grad S reproduce the +u(u^2+v^2)/2 coupling
    // solved by the amplitude-2 soliton.
    p.hamiltonian = [](const State& z) {
        const double r2 = z[0] * z[0] + z[1] * z[1];
        return -0.125 * r2 * r2 - 0.5 * (z[2] * z[2] + z[3] * z[3]);
    };
    p.gradient = [](const State& z) {
        const double r2 = z[0] * z[0] + z[1] * z[1];
        State g(4);
        g << -0.5 * z[0] * r2, -0.5 * z[1] * r2, -z[2], -z[3];
        return g;
    };
    p.hessian = [](const State& z) {
        const double u = z[0];
        const double v = z[1];
        const double r2 = u * u + v * v;
        StateMatrix h = StateMatrix::Zero(4, 4);
        h(0, 0) = -0.5 * r2 - u * u;
        h(1, 1) = -0.5 * r2 - v * v;
        h(0, 1) = h(1, 0) = -u * v;
        h(2, 2) = -1.0;
        h(3, 3) = -1.0;
        return h;
    };
    const double length = p.domain_length;
    auto soliton = [length](double t, double x) {
        const double y = centred(x, length);
        const double sech = 1.0 / std::cosh(y);
        const double dsech = -std::sinh(y) * sech * sech;
        State z(4);
        z << 2.0 * std::cos(t) * sech, 2.0 * std::sin(t) * sech, 2.0 * std::cos(t) * dsech,
            2.0 * std::sin(t) * dsech;
        return z;
    };
    p.exact_solution = soliton;
    p.initial_condition = [soliton](double x) { return soliton(0.0, x); };
    return p;
}

MultisymplecticProblem problem_by_label(const std::string& label)
{
    if (label == "linear-wave")
        return linear_wave();
    if (label == "nonlinear-wave")
        return nonlinear_wave();
    if (label == "nls")
        return nls();
    throw std::invalid_argument("unknown problem '" + label +
                                "' (expected linear-wave, nonlinear-wave or nls)");
}

bool ValidationReport::passed() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

ValidationReport validate(const MultisymplecticProblem& problem, unsigned seed)
{
    ValidationReport report;
    const int D = problem.dimension;
    auto add = [&](std::string name, double residual, double tol) {
        report.checks.push_back({std::move(name), residual <= tol, residual, tol});
    };

    if (problem.K.rows() != D || problem.K.cols() != D || problem.L.rows() != D ||
        problem.L.cols() != D) {
        add("dimensions", 1.0, 0.0);
        return report;
    }
    add("K skew-symmetric", (problem.K + problem.K.transpose()).cwiseAbs().maxCoeff(), 0.0);
    add("L skew-symmetric", (problem.L + problem.L.transpose()).cwiseAbs().maxCoeff(), 0.0);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    double grad_err = 0.0;
    double hess_err = 0.0;
    double hess_sym = 0.0;
    const double step = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        State z(D);
        for (int c = 0; c < D; ++c)
            z[c] = unif(rng);
        const State g = problem.gradient(z);
        const StateMatrix H = problem.hessian(z);
        hess_sym = std::max(hess_sym, (H - H.transpose()).cwiseAbs().maxCoeff());
        for (int c = 0; c < D; ++c) {
            State zp = z;
            State zm = z;
            zp[c] += step;
            zm[c] -= step;
            const double fd = (problem.hamiltonian(zp) - problem.hamiltonian(zm)) / (2 * step);
            grad_err = std::max(grad_err, std::abs(fd - g[c]) / std::max(1.0, std::abs(g[c])));
            const State gfd = (problem.gradient(zp) - problem.gradient(zm)) / (2 * step);
            for (int r = 0; r < D; ++r)
                hess_err = std::max(hess_err, std::abs(gfd[r] - H(r, c)) /
                                                  std::max(1.0, std::abs(H(r, c))));
        }
    }
    add("gradient vs finite differences", grad_err, 1e-6);
    add("hessian vs finite differences", hess_err, 1e-6);
    add("hessian symmetric", hess_sym, 0.0);

    if (problem.exact_solution) {
        const auto& z = *problem.exact_solution;
        const double h = 1e-5;
        double pde = 0.0;
        std::uniform_real_distribution<double> ut(0.0, 1.0);
        std::uniform_real_distribution<double> ux(0.0, problem.domain_length);
        for (int trial = 0; trial < 20; ++trial) {
            const double t = ut(rng);
            const double x = ux(rng);
            const State zt = (z(t + h, x) - z(t - h, x)) / (2 * h);
            const State zx = (z(t, x + h) - z(t, x - h)) / (2 * h);
            const Vector r = problem.K * Vector(zt) + problem.L * Vector(zx) -
                             Vector(problem.gradient(z(t, x)));
            pde = std::max(pde, r.cwiseAbs().maxCoeff());
        }
        add("exact solution PDE residual", pde, 1e-8);
    }
    return report;
}

} // namespace mspde
