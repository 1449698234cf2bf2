#include "mspde/spatial_operator.hpp"

#include "mspde/quadrature.hpp"

#include <stdexcept>

namespace mspde {

State jump(const TraceValues& trace) { return trace.minus - trace.plus; }
State avg(const TraceValues& trace) { return 0.5 * (trace.minus + trace.plus); }

TraceValues trace_values(const SpatialSpace& space, const Vector& field, int components, int node)
{
    const int M = space.element_count();
    const int n = space.dof_count();
    const int left = (node - 1 + M) % M;
    const int right = node % M;
    TraceValues tr;
    tr.node = node;
    tr.minus.resize(components);
    tr.plus.resize(components);
    for (int c = 0; c < components; ++c) {
        const Vector comp = component(field, c, n);
        tr.minus[c] = space.value(comp, left, 1.0);
        tr.plus[c] = space.value(comp, right, 0.0);
    }
    return tr;
}

SparseMatrix weak_derivative_matrix(const SpatialSpace& test, const SpatialSpace& trial,
                                    double jump_coefficient)
{
    if (test.element_count() != trial.element_count())
        throw std::invalid_argument("weak_derivative_matrix: meshes differ");
    const int M = trial.element_count();
    const int nt = test.local_size();
    const int nu = trial.local_size();
    const QuadratureRule rule = policy_rule(test.degree() + trial.degree());

    // Reference element block int psi_i phi_j' (jacobians cancel).
    Matrix local = Matrix::Zero(nt, nu);
    std::vector<double> psi(nt);
    std::vector<double> dphi(nu);
    for (std::size_t g = 0; g < rule.size(); ++g) {
        test.basis().eval_all(rule.points[g], 0, psi.data());
        trial.basis().eval_all(rule.points[g], 1, dphi.data());
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nu; ++j)
                local(i, j) += rule.weights[g] * psi[i] * dphi[j];
    }
    std::vector<double> psi0(nt), psi1(nt), phi0(nu), phi1(nu);
    test.basis().eval_all(0.0, 0, psi0.data());
    test.basis().eval_all(1.0, 0, psi1.data());
    trial.basis().eval_all(0.0, 0, phi0.data());
    trial.basis().eval_all(1.0, 0, phi1.data());

    std::vector<Eigen::Triplet<double>> triplets;
    for (int m = 0; m < M; ++m) {
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nu; ++j)
                triplets.emplace_back(test.dof(m, i), trial.dof(m, j), local(i, j));
    }
    if (jump_coefficient != 0.0) {
        // Node m: left element m-1 (xi = 1), right element m (xi = 0).
        for (int node = 0; node < M; ++node) {
            const int l = (node - 1 + M) % M;
            const int r = node;
            // [U] = U^- - U^+ ; {psi} = (psi^- + psi^+)/2 ; contribution -[U]{psi}.
            for (int i = 0; i < nt; ++i) {
                for (int j = 0; j < nu; ++j) {
                    const double s = -jump_coefficient * 0.5;
                    // psi^- from element l, psi^+ from element r.
                    triplets.emplace_back(test.dof(l, i), trial.dof(l, j), s * psi1[i] * phi1[j]);
                    triplets.emplace_back(test.dof(l, i), trial.dof(r, j), -s * psi1[i] * phi0[j]);
                    triplets.emplace_back(test.dof(r, i), trial.dof(l, j), s * psi0[i] * phi1[j]);
                    triplets.emplace_back(test.dof(r, i), trial.dof(r, j), -s * psi0[i] * phi0[j]);
                }
            }
        }
    }
    SparseMatrix b(test.dof_count(), trial.dof_count());
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.prune(0.0);
    return b;
}

DerivativeOperator::DerivativeOperator(const SpatialSpace& space, double jump_coefficient)
    : space_(space)
{
    if (!space.discontinuous())
        throw std::invalid_argument("DerivativeOperator: G is defined on discontinuous spaces only");
    weak_ = weak_derivative_matrix(space, space, jump_coefficient);
}

Vector DerivativeOperator::apply(const Vector& field) const
{
    return space_.solve_mass(weak_ * field);
}

Vector DerivativeOperator::apply(const Vector& field, int components) const
{
    const int n = space_.dof_count();
    Vector out(field.size());
    for (int c = 0; c < components; ++c)
        out.segment(c * n, n) = apply(Vector(field.segment(c * n, n)));
    return out;
}

std::pair<SpatialSpace, Vector> broken_derivative(const SpatialSpace& space, const Vector& field,
                                                  int components)
{
    if (space.degree() < 1)
        throw std::invalid_argument("broken_derivative: degree must be at least 1");
    SpatialSpace target(space.partition(), space.degree() - 1, Continuity::Discontinuous);
    const int n = space.dof_count();
    const int nd = target.dof_count();
    Vector out(components * nd);
    const auto& nodes = target.basis().nodes();
    for (int c = 0; c < components; ++c) {
        const Vector comp = component(field, c, n);
        for (int m = 0; m < space.element_count(); ++m)
            for (int j = 0; j < target.local_size(); ++j)
                out[c * nd + target.dof(m, j)] = space.value(comp, m, nodes[j], 1);
    }
    return {target, out};
}

double element_inner(const SpatialSpace& space, const Vector& u, const Vector& v, int components,
                     int element)
{
    const QuadratureRule rule = gauss_legendre(space.degree() + 1);
    const int n = space.dof_count();
    const double h = space.element_length(element);
    double sum = 0.0;
    for (int c = 0; c < components; ++c) {
        const Vector uc = component(u, c, n);
        const Vector vc = component(v, c, n);
        sum += rule.integrate([&](double xi) {
            return space.value(uc, element, xi) * space.value(vc, element, xi);
        });
    }
    return h * sum;
}

double inner(const SpatialSpace& space, const Vector& u, const Vector& v, int components)
{
    double sum = 0.0;
    for (int m = 0; m < space.element_count(); ++m)
        sum += element_inner(space, u, v, components, m);
    return sum;
}

GBoundaryTerms local_g_boundary_terms(const SpatialSpace& space, const Vector& u, const Vector& v,
                                      int components, int element)
{
    const TraceValues ul = trace_values(space, u, components, element);
    const TraceValues vl = trace_values(space, v, components, element);
    const TraceValues ur = trace_values(space, u, components, element + 1);
    const TraceValues vr = trace_values(space, v, components, element + 1);
    GBoundaryTerms t;
    t.left_minus_plus = ul.minus.dot(vl.plus);
    t.left_plus_minus = ul.plus.dot(vl.minus);
    t.right_minus_plus = ur.minus.dot(vr.plus);
    t.right_plus_minus = ur.plus.dot(vr.minus);
    t.left_average = 0.5 * (ul.minus.dot(vl.minus) + ul.plus.dot(vl.plus));
    t.right_average = 0.5 * (ur.minus.dot(vr.minus) + ur.plus.dot(vr.plus));
    return t;
}

namespace {

// int_{e_m} f . 1 for a component-major field.
double element_sum_integral(const SpatialSpace& space, const Vector& f, int components, int m)
{
    // All nodal values 1 represent the constant function exactly.
    const Vector ones = Vector::Ones(f.size());
    return element_inner(space, f, ones, components, m);
}

} // namespace

double local_orthogonality_residual(const DerivativeOperator& g, const Vector& u, int components,
                                    int element)
{
    const SpatialSpace& space = g.space();
    const Vector gu = g.apply(u, components);
    const double lhs = element_sum_integral(space, gu, components, element);
    const State left = avg(trace_values(space, u, components, element));
    const State right = avg(trace_values(space, u, components, element + 1));
    return lhs - (right.sum() - left.sum());
}

double local_skew_residual(const DerivativeOperator& g, const Vector& u, const Vector& v,
                           int components, int element)
{
    const SpatialSpace& space = g.space();
    const Vector gu = g.apply(u, components);
    const Vector gv = g.apply(v, components);
    const double lhs = element_inner(space, gu, v, components, element) +
                       element_inner(space, u, gv, components, element);
    return lhs - local_g_boundary_terms(space, u, v, components, element).skew_boundary();
}

std::pair<SpatialSpace, Vector> product_field(const SpatialSpace& space, const Vector& u,
                                              const Vector& v, int components)
{
    SpatialSpace target(space.partition(), 2 * space.degree(), Continuity::Discontinuous);
    const int n = space.dof_count();
    Vector w = Vector::Zero(target.dof_count());
    const auto& nodes = target.basis().nodes();
    for (int m = 0; m < space.element_count(); ++m)
        for (int j = 0; j < target.local_size(); ++j) {
            double s = 0.0;
            for (int c = 0; c < components; ++c)
                s += space.value(component(u, c, n), m, nodes[j]) *
                     space.value(component(v, c, n), m, nodes[j]);
            w[target.dof(m, j)] = s;
        }
    return {target, w};
}

double local_product_residual(const DerivativeOperator& g, const Vector& u, const Vector& v,
                              int components, int element)
{
    const SpatialSpace& space = g.space();
    auto [pspace, w] = product_field(space, u, v, components);
    const DerivativeOperator gp(pspace);
    const Vector gw = gp.apply(w);
    const double g_product = element_sum_integral(pspace, gw, 1, element);

    const Vector gu = g.apply(u, components);
    const Vector gv = g.apply(v, components);
    const GBoundaryTerms t = local_g_boundary_terms(space, u, v, components, element);
    const double lhs = g_product + t.left_average - t.right_average;
    const double rhs = element_inner(space, gu, v, components, element) +
                       element_inner(space, u, gv, components, element) +
                       0.5 * (t.left_minus_plus + t.left_plus_minus) -
                       0.5 * (t.right_minus_plus + t.right_plus_minus);
    return lhs - rhs;
}

} // namespace mspde
