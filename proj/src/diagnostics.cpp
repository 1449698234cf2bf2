#include "mspde/diagnostics.hpp"

#include "mspde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mspde {

FluxDensity densities_fluxes(const MultisymplecticProblem& problem, const State& z,
                             const State& dz, const State& zt)
{
    const double s = problem.hamiltonian(z);
    const State kz = problem.K * z;
    const State lz = problem.L * z;
    FluxDensity out;
    out.momentum_density = 0.5 * dz.dot(kz);
    out.momentum_flux = -0.5 * zt.dot(kz) - s;
    out.energy_density = -0.5 * dz.dot(lz) - s;
    out.energy_flux = 0.5 * zt.dot(lz);
    return out;
}

namespace {

LagrangeBasis trial_basis_of(const Trajectory& t) { return LagrangeBasis(t.q + 1); }

double slab_length(const Trajectory& t, int n) { return t.times[n + 1] - t.times[n]; }

bool is_wave(const MultisymplecticProblem& problem)
{
    return static_cast<bool>(problem.wave_potential) && problem.dimension == 3;
}

} // namespace

TrajectoryFields::TrajectoryFields(const MultisymplecticProblem& problem,
                                   const Trajectory& trajectory)
    : problem_(&problem), trajectory_(&trajectory)
{
    if (!trajectory.space)
        throw std::invalid_argument("TrajectoryFields: trajectory has no space");
    if (space().discontinuous()) {
        g_.emplace(space());
        for (const SlabCoefficients& z : trajectory.slabs) {
            SlabCoefficients gz(z.components(), z.spatial_dofs(), z.temporal_nodes());
            for (int k = 0; k < z.temporal_nodes(); ++k)
                gz.set_node_state(k, apply_g(z.node_state(k)));
            g_slabs_.push_back(std::move(gz));
        }
    }
}

Vector TrajectoryFields::apply_g(const Vector& state) const
{
    if (!g_)
        throw std::logic_error("apply_g: continuous space has no G operator");
    return g_->apply(state, dimension());
}

State TrajectoryFields::value(int n, double tau, int m, double xi) const
{
    const Trajectory& t = *trajectory_;
    return evaluate(space(), trial_basis_of(t), slab_length(t, n), t.slabs[n], tau, m, xi, 0, 0);
}

State TrajectoryFields::time_derivative(int n, double tau, int m, double xi) const
{
    const Trajectory& t = *trajectory_;
    return evaluate(space(), trial_basis_of(t), slab_length(t, n), t.slabs[n], tau, m, xi, 1, 0);
}

State TrajectoryFields::space_derivative(int n, double tau, int m, double xi) const
{
    const Trajectory& t = *trajectory_;
    if (g_)
        return evaluate(space(), trial_basis_of(t), slab_length(t, n), g_slabs_[n], tau, m, xi, 0,
                        0);
    return evaluate(space(), trial_basis_of(t), slab_length(t, n), t.slabs[n], tau, m, xi, 0, 1);
}

State TrajectoryFields::space_time_derivative(int n, double tau, int m, double xi) const
{
    const Trajectory& t = *trajectory_;
    if (g_)
        return evaluate(space(), trial_basis_of(t), slab_length(t, n), g_slabs_[n], tau, m, xi, 1,
                        0);
    return evaluate(space(), trial_basis_of(t), slab_length(t, n), t.slabs[n], tau, m, xi, 1, 1);
}

State TrajectoryFields::state_value(const Vector& state, int m, double xi) const
{
    const int n = space().dof_count();
    State out(dimension());
    for (int c = 0; c < dimension(); ++c)
        out[c] = space().value(Vector(component(state, c, n)), m, xi, 0);
    return out;
}

State TrajectoryFields::state_derivative(const Vector& state, const Vector* g_state, int m,
                                         double xi) const
{
    if (g_) {
        if (!g_state)
            throw std::invalid_argument("state_derivative: G(Z) required for a broken space");
        return state_value(*g_state, m, xi);
    }
    const int n = space().dof_count();
    State out(dimension());
    for (int c = 0; c < dimension(); ++c)
        out[c] = space().value(Vector(component(state, c, n)), m, xi, 1);
    return out;
}

FluxDensity TrajectoryFields::at(int n, double t, double x) const
{
    const Trajectory& tr = *trajectory_;
    const double tau = (t - tr.times[n]) / slab_length(tr, n);
    if (tau < -1e-12 || tau > 1.0 + 1e-12)
        throw std::invalid_argument("TrajectoryFields::at: time outside slab");
    const auto [m, xi] = space().partition().locate(x);
    const double tc = std::clamp(tau, 0.0, 1.0);
    return densities_fluxes(*problem_, value(n, tc, m, xi), space_derivative(n, tc, m, xi),
                            time_derivative(n, tc, m, xi));
}

std::vector<double> deviation(const std::vector<double>& series)
{
    std::vector<double> out(series.size(), 0.0);
    for (std::size_t i = 0; i < series.size(); ++i)
        out[i] = std::abs(series[i] - series.front());
    return out;
}

double max_abs(const std::vector<double>& values)
{
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> InvariantSeries::dev_mass(int component) const
{
    return deviation(mass.at(component));
}
std::vector<double> InvariantSeries::dev_momentum() const { return deviation(momentum); }
std::vector<double> InvariantSeries::dev_energy() const { return deviation(energy); }

InvariantSeries global_invariants(const TrajectoryFields& fields)
{
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const MultisymplecticProblem& problem = fields.problem();
    const int D = fields.dimension();
    const int p = space.degree();
    const QuadratureRule rule = policy_rule(std::max(2 * p, (problem.gradient_degree + 1) * p));

    InvariantSeries out;
    const int nodes = tr.slab_count() + 1;
    out.times.assign(tr.times.begin(), tr.times.begin() + nodes);
    out.mass.assign(D, std::vector<double>(nodes, 0.0));
    out.momentum.assign(nodes, 0.0);
    out.energy.assign(nodes, 0.0);
    const State zero = State::Zero(D);

    for (int n = 0; n < nodes; ++n) {
        const Vector state = tr.node_state(n);
        Vector gstate;
        if (fields.discontinuous())
            gstate = fields.apply_g(state);
        for (int m = 0; m < space.element_count(); ++m) {
            const double h = space.element_length(m);
            for (std::size_t b = 0; b < rule.size(); ++b) {
                const double xi = rule.points[b];
                const State z = fields.state_value(state, m, xi);
                const State dz = fields.state_derivative(state, &gstate, m, xi);
                const FluxDensity f = densities_fluxes(problem, z, dz, zero);
                const double w = rule.weights[b] * h;
                for (int c = 0; c < D; ++c)
                    out.mass[c][n] += w * z[c];
                out.momentum[n] += w * f.momentum_density;
                out.energy[n] += w * f.energy_density;
            }
        }
    }
    return out;
}

double w_integral(const TrajectoryFields& fields, int n, int element)
{
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const MultisymplecticProblem& problem = fields.problem();
    const int D = fields.dimension();
    const int p = space.degree();
    const int q = tr.q;
    const TemporalSlab slab = tr.slab(n);

    const SlabCoefficients pdz = l2_project_spacetime(
        space, slab, D,
        SpaceTimeSampler([&](double tau, int m, double xi) {
            return fields.space_derivative(n, tau, m, xi);
        }),
        q + 1, fields.discontinuous() ? p : p - 1);

    const int g = problem.gradient_degree;
    const QuadratureRule trule = policy_rule(g * (q + 1) + q);
    const QuadratureRule xrule = policy_rule(g * p + p);
    const int m0 = element < 0 ? 0 : element;
    const int m1 = element < 0 ? space.element_count() : element + 1;
    double total = 0.0;
    for (std::size_t a = 0; a < trule.size(); ++a)
        for (int m = m0; m < m1; ++m)
            for (std::size_t b = 0; b < xrule.size(); ++b) {
                const double tau = trule.points[a];
                const double xi = xrule.points[b];
                const State z = fields.value(n, tau, m, xi);
                const State pd = evaluate(space, slab.test_basis(), slab.length(), pdz, tau, m, xi);
                total += trule.weights[a] * slab.length() * xrule.weights[b] *
                         space.element_length(m) * problem.gradient(z).dot(pd);
            }
    return total;
}

std::vector<SlabLaw> slab_laws(const TrajectoryFields& fields, const InvariantSeries& series)
{
    const Trajectory& tr = fields.trajectory();
    std::vector<SlabLaw> out(tr.slab_count());
    for (int n = 0; n < tr.slab_count(); ++n) {
        SlabLaw& law = out[n];
        law.energy_change = series.energy[n + 1] - series.energy[n];
        law.momentum_change = series.momentum[n + 1] - series.momentum[n];
        if (tr.scheme == Scheme::CgMomentum) {
            law.momentum_residual = law.momentum_change;
        } else {
            law.w_integral = w_integral(fields, n);
            law.momentum_residual = law.momentum_change - law.w_integral;
        }
    }
    return out;
}

LocalResidual local_conservation_residuals(const TrajectoryFields& fields, int n, int element)
{
    if (!fields.discontinuous())
        throw std::invalid_argument("local_conservation_residuals: discontinuous scheme only");
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const MultisymplecticProblem& problem = fields.problem();
    const int M = space.element_count();
    const int p = space.degree();
    const int q = tr.q;
    const int m = element;
    if (m < 0 || m >= M)
        throw std::invalid_argument("local_conservation_residuals: element out of range");
    const double dt = slab_length(tr, n);
    const Matrix& K = problem.K;
    const Matrix& L = problem.L;

    // Change of the element integrals of the densities.
    const QuadratureRule xrule = policy_rule(std::max(2 * p, (problem.gradient_degree + 1) * p));
    const double h = space.element_length(m);
    const State zero = State::Zero(fields.dimension());
    LocalResidual r;
    for (std::size_t b = 0; b < xrule.size(); ++b) {
        const double xi = xrule.points[b];
        const double w = xrule.weights[b] * h;
        const FluxDensity end = densities_fluxes(problem, fields.value(n, 1.0, m, xi),
                                                 fields.space_derivative(n, 1.0, m, xi), zero);
        const FluxDensity start = densities_fluxes(problem, fields.value(n, 0.0, m, xi),
                                                   fields.space_derivative(n, 0.0, m, xi), zero);
        r.momentum += w * (end.momentum_density - start.momentum_density);
        r.energy += w * (end.energy_density - start.energy_density);
    }

    // Interface terms, integrated over the slab.
    const int left = (m + M - 1) % M;
    const int right = (m + 1) % M;
    const QuadratureRule trule = policy_rule(2 * q + 1);
    for (std::size_t a = 0; a < trule.size(); ++a) {
        const double tau = trule.points[a];
        const double w = trule.weights[a] * dt;
        // Traces at node m (left) and node m+1 (right) of the element.
        const State zl_minus = fields.value(n, tau, left, 1.0);
        const State zl_plus = fields.value(n, tau, m, 0.0);
        const State zr_minus = fields.value(n, tau, m, 1.0);
        const State zr_plus = fields.value(n, tau, right, 0.0);
        const State tl_minus = fields.time_derivative(n, tau, left, 1.0);
        const State tl_plus = fields.time_derivative(n, tau, m, 0.0);
        const State tr_minus = fields.time_derivative(n, tau, m, 1.0);
        const State tr_plus = fields.time_derivative(n, tau, right, 0.0);
        const State jz_l = zl_minus - zl_plus;
        const State jz_r = zr_minus - zr_plus;
        const State jt_l = tl_minus - tl_plus;
        const State jt_r = tr_minus - tr_plus;

        const double energy_terms =
            0.5 * tr_minus.dot(L * zr_minus) - 0.5 * tl_plus.dot(L * zl_plus) +
            0.25 * jz_l.dot(L * tl_plus) + 0.25 * jz_r.dot(L * tr_minus) -
            0.25 * jt_l.dot(L * zl_plus) - 0.25 * jt_r.dot(L * zr_minus);
        const double momentum_terms =
            0.5 * zr_minus.dot(K * tr_minus) - 0.5 * zl_plus.dot(K * tl_plus) -
            0.25 * jz_l.dot(K * tl_plus) - 0.25 * jz_r.dot(K * tr_minus) +
            0.25 * jt_l.dot(K * zl_plus) + 0.25 * jt_r.dot(K * zr_minus);
        r.energy += w * energy_terms;
        r.momentum += w * momentum_terms;
    }
    r.momentum -= w_integral(fields, n, m);
    return r;
}

std::vector<double> bochner_error(const TrajectoryFields& fields, int slabs)
{
    const MultisymplecticProblem& problem = fields.problem();
    if (!problem.exact_solution)
        throw std::invalid_argument("bochner_error: problem has no exact solution");
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const auto& exact = *problem.exact_solution;
    const int D = fields.dimension();
    const int count = slabs < 0 ? tr.slab_count() : std::min(slabs, tr.slab_count());
    const QuadratureRule rule = policy_rule(-1);
    const auto& part = space.partition();

    std::vector<double> sum(D, 0.0);
    for (int n = 0; n < count; ++n) {
        const double dt = slab_length(tr, n);
        for (std::size_t a = 0; a < rule.size(); ++a) {
            const double t = tr.times[n] + rule.points[a] * dt;
            for (int m = 0; m < space.element_count(); ++m) {
                const double h = space.element_length(m);
                for (std::size_t b = 0; b < rule.size(); ++b) {
                    const State z = fields.value(n, rule.points[a], m, rule.points[b]);
                    const State e = z - exact(t, part.element_start(m) + rule.points[b] * h);
                    const double w = rule.weights[a] * dt * rule.weights[b] * h;
                    for (int c = 0; c < D; ++c)
                        sum[c] += w * e[c] * e[c];
                }
            }
        }
    }
    for (double& s : sum)
        s = std::sqrt(s);
    return sum;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs)
{
    if (errors.size() != hs.size() || errors.size() < 2)
        throw std::invalid_argument("eoc: need equal-length sequences of at least two entries");
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (!(hs[i] > 0.0) || !(hs[i + 1] > 0.0) || !(hs[i + 1] < hs[i]))
            throw std::invalid_argument("eoc: mesh sizes must be positive and strictly decreasing");
        if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0))
            out.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            out.push_back(std::log(errors[i + 1] / errors[i]) / std::log(hs[i + 1] / hs[i]));
    }
    return out;
}

namespace {

// Spatial derivative of a scalar CG/DG field in the scheme's sense: the L2
// projection of u_x for continuous spaces, G(u) for broken ones.
Vector discrete_derivative(const TrajectoryFields& fields, const Vector& u)
{
    const SpatialSpace& space = fields.space();
    if (fields.discontinuous())
        return fields.derivative_operator()->apply(u);
    return l2_project_spatial(
        space, 1,
        std::function<State(int, double)>([&](int m, double xi) {
            State s(1);
            s[0] = space.value(u, m, xi, 1);
            return s;
        }),
        space.degree() - 1);
}

double potential_integral(const TrajectoryFields& fields, const Vector& u)
{
    const SpatialSpace& space = fields.space();
    const QuadratureRule rule = policy_rule(4 * space.degree());
    double total = 0.0;
    for (int m = 0; m < space.element_count(); ++m)
        for (std::size_t b = 0; b < rule.size(); ++b)
            total += rule.weights[b] * space.element_length(m) *
                     fields.problem().wave_potential(space.value(u, m, rule.points[b]));
    return total;
}

double norm_squared(const SpatialSpace& space, const Vector& u)
{
    return u.dot(space.mass_matrix() * u);
}

void require_wave(const TrajectoryFields& fields, const char* who)
{
    if (!is_wave(fields.problem()))
        throw std::invalid_argument(std::string(who) + ": wave-type problem required");
}

} // namespace

double auxiliary_identity_residual(const TrajectoryFields& fields)
{
    require_wave(fields, "auxiliary_identity_residual");
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const int n = space.dof_count();
    const LagrangeBasis chi(tr.q + 1);
    const QuadratureRule gauss = gauss_legendre(tr.q + 1);
    double worst = 0.0;
    for (int s = 0; s < tr.slab_count(); ++s) {
        const SlabCoefficients& z = tr.slabs[s];
        for (std::size_t a = 0; a < gauss.size(); ++a) {
            Vector u = Vector::Zero(n);
            Vector w = Vector::Zero(n);
            for (int k = 0; k < z.temporal_nodes(); ++k) {
                const double c = chi.eval(k, gauss.points[a]);
                for (int i = 0; i < n; ++i) {
                    u[i] += c * z(0, i, k);
                    w[i] += c * z(2, i, k);
                }
            }
            worst = std::max(worst, (w - discrete_derivative(fields, u)).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double StabilityReport::max_slack() const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (double v : lhs)
        worst = std::max(worst, v - bound);
    return worst;
}

StabilityReport stability_monitor(const TrajectoryFields& fields)
{
    require_wave(fields, "stability_monitor");
    const Trajectory& tr = fields.trajectory();
    const SpatialSpace& space = fields.space();
    const int n = space.dof_count();

    StabilityReport out;
    const Vector u0 = component(tr.initial_state, 0, n);
    const Vector v0 = component(tr.initial_state, 1, n);
    double du0 = 0.0;
    if (fields.discontinuous()) {
        du0 = norm_squared(space, fields.derivative_operator()->apply(u0));
    } else {
        const QuadratureRule rule = policy_rule(2 * space.degree() - 2);
        for (int m = 0; m < space.element_count(); ++m)
            for (std::size_t b = 0; b < rule.size(); ++b) {
                const double d = space.value(u0, m, rule.points[b], 1);
                du0 += rule.weights[b] * space.element_length(m) * d * d;
            }
    }
    out.bound = norm_squared(space, v0) + du0 + 2.0 * potential_integral(fields, u0);

    for (int k = 0; k <= tr.slab_count(); ++k) {
        const Vector state = tr.node_state(k);
        const Vector u = component(state, 0, n);
        const Vector v = component(state, 1, n);
        out.lhs.push_back(norm_squared(space, v) + norm_squared(space, discrete_derivative(fields, u)) +
                          potential_integral(fields, u));
    }
    return out;
}

} // namespace mspde
