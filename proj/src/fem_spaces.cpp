#include "mspde/fem_spaces.hpp"

#include "mspde/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <string>

namespace mspde {

struct SpatialSpace::Impl
{
    Partition1D partition;
    int degree;
    Continuity continuity;
    LagrangeBasis basis;
    int dofs;
    SparseMatrix mass;
    Eigen::SimplicialLDLT<SparseMatrix> mass_solver;

    Impl(Partition1D part, int p, Continuity cont)
        : partition(std::move(part)), degree(p), continuity(cont), basis(p)
    {
    }

    int dof(int m, int j) const
    {
        const int M = partition.element_count();
        if (continuity == Continuity::Discontinuous)
            return m * (degree + 1) + j;
        return (m * degree + j) % (M * degree);
    }
};

SpatialSpace::SpatialSpace(Partition1D partition, int degree, Continuity continuity)
{
    if (!partition.periodic())
        throw std::invalid_argument("SpatialSpace: only periodic partitions are supported");
    if (degree < 0 || (continuity == Continuity::Continuous && degree < 1))
        throw std::invalid_argument("SpatialSpace: invalid degree " + std::to_string(degree));

    auto impl = std::make_shared<Impl>(std::move(partition), degree, continuity);
    const int M = impl->partition.element_count();
    if (continuity == Continuity::Continuous && M * degree < 2)
        throw std::invalid_argument("SpatialSpace: continuous space needs at least two dofs");
    impl->dofs = continuity == Continuity::Discontinuous ? M * (degree + 1) : M * degree;

    const int n = degree + 1;
    const QuadratureRule rule = gauss_legendre(n);
    Matrix local = Matrix::Zero(n, n);
    std::vector<double> phi(n);
    for (std::size_t g = 0; g < rule.size(); ++g) {
        impl->basis.eval_all(rule.points[g], 0, phi.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                local(i, j) += rule.weights[g] * phi[i] * phi[j];
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(M) * n * n);
    for (int m = 0; m < M; ++m) {
        const double h = impl->partition.element_length(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                triplets.emplace_back(impl->dof(m, i), impl->dof(m, j), h * local(i, j));
    }
    impl->mass.resize(impl->dofs, impl->dofs);
    impl->mass.setFromTriplets(triplets.begin(), triplets.end());
    impl->mass_solver.compute(impl->mass);
    if (impl->mass_solver.info() != Eigen::Success)
        throw std::runtime_error("SpatialSpace: mass matrix factorisation failed");
    impl_ = std::move(impl);
}

const Partition1D& SpatialSpace::partition() const { return impl_->partition; }
const LagrangeBasis& SpatialSpace::basis() const { return impl_->basis; }
int SpatialSpace::degree() const { return impl_->degree; }
Continuity SpatialSpace::continuity() const { return impl_->continuity; }
int SpatialSpace::dof_count() const { return impl_->dofs; }
int SpatialSpace::element_count() const { return impl_->partition.element_count(); }
double SpatialSpace::element_length(int m) const { return impl_->partition.element_length(m); }
int SpatialSpace::dof(int element, int local) const { return impl_->dof(element, local); }
const SparseMatrix& SpatialSpace::mass_matrix() const { return impl_->mass; }

Vector SpatialSpace::solve_mass(const Vector& rhs) const
{
    Vector x = impl_->mass_solver.solve(rhs);
    return x;
}

double SpatialSpace::value(const Vector& coeffs, int element, double xi, int order) const
{
    double v = 0.0;
    for (int j = 0; j < local_size(); ++j)
        v += coeffs[dof(element, j)] * impl_->basis.eval(j, xi, order);
    if (order == 1)
        v /= element_length(element);
    return v;
}

double SpatialSpace::value_at(const Vector& coeffs, double x) const
{
    const auto [m, xi] = impl_->partition.locate(x);
    return value(coeffs, m, xi);
}

TemporalSlab::TemporalSlab(double t_start, double t_end, int q)
    : t_start_(t_start), t_end_(t_end), q_(q), trial_(q + 1), test_(q)
{
    if (!(t_end > t_start))
        throw std::invalid_argument("TemporalSlab: t_end must exceed t_start");
    if (q < 0)
        throw std::invalid_argument("TemporalSlab: negative temporal degree");
}

double TemporalSlab::reference_time(double t) const
{
    const double tol = 1e-12 * std::max(1.0, std::abs(t_end_));
    if (t < t_start_ - tol || t > t_end_ + tol)
        throw std::invalid_argument("TemporalSlab: time outside slab");
    return std::clamp((t - t_start_) / length(), 0.0, 1.0);
}

SlabCoefficients::SlabCoefficients(int components, int spatial_dofs, int temporal_nodes)
    : components_(components), spatial_dofs_(spatial_dofs), temporal_nodes_(temporal_nodes),
      values_(Vector::Zero(static_cast<Eigen::Index>(components) * spatial_dofs * temporal_nodes))
{
}

Vector SlabCoefficients::node_state(int k) const
{
    Vector s(components_ * spatial_dofs_);
    for (int c = 0; c < components_; ++c)
        for (int i = 0; i < spatial_dofs_; ++i)
            s[c * spatial_dofs_ + i] = (*this)(c, i, k);
    return s;
}

void SlabCoefficients::set_node_state(int k, const Vector& state)
{
    for (int c = 0; c < components_; ++c)
        for (int i = 0; i < spatial_dofs_; ++i)
            (*this)(c, i, k) = state[c * spatial_dofs_ + i];
}

State evaluate(const SpatialSpace& space, const LagrangeBasis& temporal, double slab_length,
               const SlabCoefficients& coeffs, double tau, int element, double xi, int time_order,
               int space_order)
{
    const int D = coeffs.components();
    const int nt = temporal.size();
    const int nx = space.local_size();
    double theta[16];
    double phi[16];
    temporal.eval_all(tau, time_order, theta);
    space.basis().eval_all(xi, space_order, phi);
    double scale = 1.0;
    if (time_order == 1)
        scale /= slab_length;
    if (space_order == 1)
        scale /= space.element_length(element);

    State out = State::Zero(D);
    for (int c = 0; c < D; ++c) {
        double v = 0.0;
        for (int j = 0; j < nx; ++j) {
            const int gi = space.dof(element, j);
            double tv = 0.0;
            for (int k = 0; k < nt; ++k)
                tv += coeffs(c, gi, k) * theta[k];
            v += tv * phi[j];
        }
        out[c] = v * scale;
    }
    return out;
}

State eval_field(const SpatialSpace& space, const TemporalSlab& slab,
                 const SlabCoefficients& coeffs, double t, double x)
{
    const double tau = slab.reference_time(t);
    const auto [m, xi] = space.partition().locate(x);
    return evaluate(space, slab.trial_basis(), slab.length(), coeffs, tau, m, xi);
}

Vector l2_project_spatial(const SpatialSpace& space, int components,
                          const std::function<State(int element, double xi)>& f,
                          int integrand_degree)
{
    const int n = space.dof_count();
    const int nloc = space.local_size();
    const QuadratureRule rule =
        policy_rule(integrand_degree < 0 ? -1 : integrand_degree + space.degree());
    Vector rhs = Vector::Zero(components * n);
    std::vector<double> phi(nloc);
    for (int m = 0; m < space.element_count(); ++m) {
        const double h = space.element_length(m);
        for (std::size_t g = 0; g < rule.size(); ++g) {
            const State v = f(m, rule.points[g]);
            space.basis().eval_all(rule.points[g], 0, phi.data());
            for (int c = 0; c < components; ++c)
                for (int i = 0; i < nloc; ++i)
                    rhs[c * n + space.dof(m, i)] += rule.weights[g] * h * v[c] * phi[i];
        }
    }
    Vector out(components * n);
    for (int c = 0; c < components; ++c)
        out.segment(c * n, n) = space.solve_mass(rhs.segment(c * n, n));
    return out;
}

Vector l2_project_spatial(const SpatialSpace& space, int components,
                          const std::function<State(double x)>& f, int integrand_degree)
{
    const auto& part = space.partition();
    return l2_project_spatial(
        space, components,
        std::function<State(int, double)>([&](int m, double xi) {
            return f(part.element_start(m) + xi * part.element_length(m));
        }),
        integrand_degree);
}

SlabCoefficients l2_project_spacetime(const SpatialSpace& space, const TemporalSlab& slab,
                                      int components, const SpaceTimeSampler& field,
                                      int time_degree, int space_degree)
{
    const int n = space.dof_count();
    const int nloc = space.local_size();
    const int nt = slab.test_size();
    const LagrangeBasis& test = slab.test_basis();
    const QuadratureRule trule = policy_rule(time_degree < 0 ? -1 : time_degree + slab.q());
    const QuadratureRule xrule =
        policy_rule(space_degree < 0 ? -1 : space_degree + space.degree());

    // Right-hand side: one ndofs x nt block per component.
    std::vector<Matrix> rhs(components, Matrix::Zero(n, nt));
    std::vector<double> theta(nt);
    std::vector<double> phi(nloc);
    for (std::size_t a = 0; a < trule.size(); ++a) {
        test.eval_all(trule.points[a], 0, theta.data());
        const double wt = trule.weights[a] * slab.length();
        for (int m = 0; m < space.element_count(); ++m) {
            const double h = space.element_length(m);
            for (std::size_t b = 0; b < xrule.size(); ++b) {
                const State v = field(trule.points[a], m, xrule.points[b]);
                space.basis().eval_all(xrule.points[b], 0, phi.data());
                const double w = wt * xrule.weights[b] * h;
                for (int c = 0; c < components; ++c)
                    for (int i = 0; i < nloc; ++i) {
                        const double s = w * v[c] * phi[i];
                        for (int l = 0; l < nt; ++l)
                            rhs[c](space.dof(m, i), l) += s * theta[l];
                    }
            }
        }
    }

    // Temporal mass matrix of the test basis (exact rule).
    Matrix mt = Matrix::Zero(nt, nt);
    const QuadratureRule exact = gauss_legendre(nt);
    for (std::size_t a = 0; a < exact.size(); ++a) {
        test.eval_all(exact.points[a], 0, theta.data());
        for (int l = 0; l < nt; ++l)
            for (int k = 0; k < nt; ++k)
                mt(l, k) += exact.weights[a] * slab.length() * theta[l] * theta[k];
    }
    const Eigen::LDLT<Matrix> mt_solver(mt);

    SlabCoefficients out(components, n, nt);
    for (int c = 0; c < components; ++c) {
        Matrix x(n, nt);
        for (int l = 0; l < nt; ++l)
            x.col(l) = space.solve_mass(rhs[c].col(l));
        // X * Mt^{-1}; Mt symmetric.
        const Matrix y = mt_solver.solve(x.transpose()).transpose();
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < nt; ++l)
                out(c, i, l) = y(i, l);
    }
    return out;
}

SlabCoefficients l2_project_spacetime(const SpatialSpace& space, const TemporalSlab& slab,
                                      int components,
                                      const std::function<State(double t, double x)>& field,
                                      int time_degree, int space_degree)
{
    const auto& part = space.partition();
    return l2_project_spacetime(
        space, slab, components,
        SpaceTimeSampler([&](double tau, int m, double xi) {
            return field(slab.t_start() + tau * slab.length(),
                         part.element_start(m) + xi * part.element_length(m));
        }),
        time_degree, space_degree);
}

} // namespace mspde
