#include "mspde/slab_solver.hpp"

#include "mspde/quadrature.hpp"
#include "mspde/spatial_operator.hpp"

#include <cmath>
#include <sstream>

namespace mspde {

std::string to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::CgPrimary:
        return "cg";
    case Scheme::CgMomentum:
        return "cg-momentum";
    case Scheme::DgPrimary:
        return "dg";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name)
{
    if (name == "cg")
        return Scheme::CgPrimary;
    if (name == "cg-momentum")
        return Scheme::CgMomentum;
    if (name == "dg")
        return Scheme::DgPrimary;
    throw std::invalid_argument("unknown variant '" + name + "' (expected cg, cg-momentum or dg)");
}

Continuity trial_continuity(Scheme scheme)
{
    return scheme == Scheme::DgPrimary ? Continuity::Discontinuous : Continuity::Continuous;
}

void SolverConfig::validate() const
{
    if (!(newton_tolerance > 0.0))
        throw std::invalid_argument("newton tolerance must be positive");
    if (max_newton_iterations < 1)
        throw std::invalid_argument("max newton iterations must be at least 1");
    if (q < 0)
        throw std::invalid_argument("temporal degree q must be >= 0");
    if (p < 1)
        throw std::invalid_argument("spatial degree p must be >= 1");
    if (!(dt > 0.0) || !(dx > 0.0))
        throw std::invalid_argument("dt and dx must be positive");
    if (!(final_time > 0.0))
        throw std::invalid_argument("final time must be positive");
}

namespace {

SparseMatrix mixed_mass_matrix(const SpatialSpace& test, const SpatialSpace& trial)
{
    const int nt = test.local_size();
    const int nu = trial.local_size();
    const QuadratureRule rule = policy_rule(test.degree() + trial.degree());
    Matrix local = Matrix::Zero(nt, nu);
    std::vector<double> psi(nt), phi(nu);
    for (std::size_t g = 0; g < rule.size(); ++g) {
        test.basis().eval_all(rule.points[g], 0, psi.data());
        trial.basis().eval_all(rule.points[g], 0, phi.data());
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nu; ++j)
                local(i, j) += rule.weights[g] * psi[i] * phi[j];
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (int m = 0; m < trial.element_count(); ++m) {
        const double h = trial.element_length(m);
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nu; ++j)
                triplets.emplace_back(test.dof(m, i), trial.dof(m, j), h * local(i, j));
    }
    SparseMatrix mm(test.dof_count(), trial.dof_count());
    mm.setFromTriplets(triplets.begin(), triplets.end());
    return mm;
}

Matrix tabulate(const LagrangeBasis& basis, const std::vector<double>& points, int order)
{
    Matrix t(points.size(), basis.size());
    for (std::size_t a = 0; a < points.size(); ++a)
        for (int k = 0; k < basis.size(); ++k)
            t(a, k) = basis.eval(k, points[a], order);
    return t;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

SlabSystem::SlabSystem(Scheme scheme, const MultisymplecticProblem& problem,
                       const SpatialSpace& space, int q, double dt)
    : scheme_(scheme), problem_(problem), trial_(space), test_(space),
      q_(q), dt_(dt), dim_(problem.dimension)
{
    if (space.continuity() != trial_continuity(scheme))
        throw std::invalid_argument("SlabSystem: spatial continuity does not match the scheme");
    if (problem.K.rows() != dim_ || problem.L.rows() != dim_)
        throw std::invalid_argument("SlabSystem: problem dimension mismatch");

    const TemporalSlab ref(0.0, dt, q);
    const LagrangeBasis& chi = ref.trial_basis();
    const LagrangeBasis& theta = ref.test_basis();
    const int ntr = q + 2;
    const int nte = q + 1;

    // Temporal blocks: int theta_l chi_k' and dt * int theta_l chi_k.
    Matrix t_deriv = Matrix::Zero(nte, ntr);
    Matrix t_mass = Matrix::Zero(nte, ntr);
    const QuadratureRule trule = gauss_legendre(q + 2);
    for (std::size_t a = 0; a < trule.size(); ++a)
        for (int l = 0; l < nte; ++l)
            for (int k = 0; k < ntr; ++k) {
                const double th = theta.eval(l, trule.points[a]);
                t_deriv(l, k) += trule.weights[a] * th * chi.eval(k, trule.points[a], 1);
                t_mass(l, k) += trule.weights[a] * dt * th * chi.eval(k, trule.points[a]);
            }

    const SparseMatrix mx = mixed_mass_matrix(test_, trial_);
    const SparseMatrix bx = weak_derivative_matrix(test_, trial_);
    const int n = trial_.dof_count();
    const int nt = test_.dof_count();

    std::vector<Eigen::Triplet<double>> full;
    auto add_kron = [&](const Matrix& comp, const SparseMatrix& spatial, const Matrix& temporal) {
        for (int c = 0; c < dim_; ++c)
            for (int c2 = 0; c2 < dim_; ++c2) {
                const double a = comp(c, c2);
                if (a == 0.0)
                    continue;
                for (int outer = 0; outer < spatial.outerSize(); ++outer)
                    for (SparseMatrix::InnerIterator it(spatial, outer); it; ++it)
                        for (int l = 0; l < nte; ++l)
                            for (int k = 0; k < ntr; ++k) {
                                const double v = a * it.value() * temporal(l, k);
                                if (v == 0.0)
                                    continue;
                                const int row = (c * nt + static_cast<int>(it.row())) * nte + l;
                                const int col = (c2 * n + static_cast<int>(it.col())) * ntr + k;
                                full.emplace_back(row, col, v);
                            }
            }
    };
    add_kron(problem_.K, mx, t_deriv);
    add_kron(problem_.L, bx, t_mass);
    linear_full_.resize(test_count(), dim_ * n * ntr);
    linear_full_.setFromTriplets(full.begin(), full.end());

    for (int outer = 0; outer < linear_full_.outerSize(); ++outer)
        for (SparseMatrix::InnerIterator it(linear_full_, outer); it; ++it) {
            const int col = static_cast<int>(it.col());
            const int k = col % ntr;
            if (k == 0)
                continue;
            const int ci = col / ntr;
            linear_unknown_triplets_.emplace_back(static_cast<int>(it.row()), ci * (q + 1) + k - 1,
                                                  it.value());
        }

    // Nonlinear quadrature, exact for polynomial grad S.
    const int g = problem_.gradient_degree;
    const QuadratureRule tq = policy_rule(g * (q + 1) + q + 1);
    const QuadratureRule xq = policy_rule(g * trial_.degree() + test_.degree());
    tw_ = tq.weights;
    xw_ = xq.weights;
    trial_t_ = tabulate(chi, tq.points, 0);
    test_t_ = tabulate(theta, tq.points, 0);
    trial_x_ = tabulate(trial_.basis(), xq.points, 0);
    test_x_ = tabulate(test_.basis(), xq.points, 0);

    if (scheme_ == Scheme::CgMomentum) {
        // grad S enters through its L2 projection Y onto P_{q+1} x DG_p. The
        // projection is local to each element and slab, so Y is eliminated:
        // int int Y phi_i theta_l = sum_k R(l, k) int int grad S phi_i chi_k
        // with R = (int theta chi) (int chi chi)^{-1}. The temporal test
        // factor is replaced by its image under R.
        Matrix mt = Matrix::Zero(ntr, ntr);
        Matrix mixed = Matrix::Zero(nte, ntr);
        const QuadratureRule exact = gauss_legendre(q + 2);
        for (std::size_t a = 0; a < exact.size(); ++a)
            for (int k = 0; k < ntr; ++k) {
                const double ck = chi.eval(k, exact.points[a]);
                for (int k2 = 0; k2 < ntr; ++k2)
                    mt(k, k2) += exact.weights[a] * ck * chi.eval(k2, exact.points[a]);
                for (int l = 0; l < nte; ++l)
                    mixed(l, k) += exact.weights[a] * theta.eval(l, exact.points[a]) * ck;
            }
        const Matrix r = mt.ldlt().solve(mixed.transpose()).transpose();
        test_t_ = trial_t_ * r.transpose();
    }
}

int SlabSystem::unknown_count() const { return dim_ * trial_.dof_count() * (q_ + 1); }
int SlabSystem::test_count() const { return dim_ * test_.dof_count() * (q_ + 1); }
int SlabSystem::unknown_index(int c, int i, int k) const
{
    return (c * trial_.dof_count() + i) * (q_ + 1) + k - 1;
}

void SlabSystem::assemble_nonlinear(const SlabCoefficients& z, Vector* residual,
                                    std::vector<Eigen::Triplet<double>>* jac) const
{
    const int D = dim_;
    const int ntr = q_ + 2;
    const int nte = q_ + 1;
    const int nlu = trial_.local_size();
    const int nlt = test_.local_size();
    const int nt = test_.dof_count();
    const std::size_t na = tw_.size();
    const std::size_t nb = xw_.size();

    // Local trial values: [c][j][k].
    std::vector<double> zloc(D * nlu * ntr);
    Matrix jloc;
    const int rows = D * nlt * nte;
    const int cols = D * nlu * (q_ + 1);
    if (jac)
        jloc.resize(rows, cols);
    State zq(D);

    for (int m = 0; m < trial_.element_count(); ++m) {
        const double h = trial_.element_length(m);
        for (int c = 0; c < D; ++c)
            for (int j = 0; j < nlu; ++j)
                for (int k = 0; k < ntr; ++k)
                    zloc[(c * nlu + j) * ntr + k] = z(c, trial_.dof(m, j), k);
        if (jac)
            jloc.setZero();

        for (std::size_t a = 0; a < na; ++a) {
            for (std::size_t b = 0; b < nb; ++b) {
                for (int c = 0; c < D; ++c) {
                    double v = 0.0;
                    for (int j = 0; j < nlu; ++j) {
                        double tv = 0.0;
                        for (int k = 0; k < ntr; ++k)
                            tv += zloc[(c * nlu + j) * ntr + k] * trial_t_(a, k);
                        v += tv * trial_x_(b, j);
                    }
                    zq[c] = v;
                }
                const double w = tw_[a] * dt_ * xw_[b] * h;
                if (residual) {
                    const State grad = problem_.gradient(zq);
                    for (int c = 0; c < D; ++c)
                        for (int i = 0; i < nlt; ++i) {
                            const double s = w * grad[c] * test_x_(b, i);
                            const int base = (c * nt + test_.dof(m, i)) * nte;
                            for (int l = 0; l < nte; ++l)
                                (*residual)[base + l] -= s * test_t_(a, l);
                        }
                }
                if (jac) {
                    const StateMatrix hess = problem_.hessian(zq);
                    for (int c = 0; c < D; ++c)
                        for (int c2 = 0; c2 < D; ++c2) {
                            const double hv = hess(c, c2);
                            if (hv == 0.0)
                                continue;
                            for (int i = 0; i < nlt; ++i)
                                for (int l = 0; l < nte; ++l) {
                                    const double s = -w * hv * test_x_(b, i) * test_t_(a, l);
                                    const int r = (c * nlt + i) * nte + l;
                                    for (int j = 0; j < nlu; ++j)
                                        for (int k = 1; k < ntr; ++k)
                                            jloc(r, (c2 * nlu + j) * (q_ + 1) + k - 1) +=
                                                s * trial_x_(b, j) * trial_t_(a, k);
                                }
                        }
                }
            }
        }
        if (jac) {
            for (int c = 0; c < D; ++c)
                for (int i = 0; i < nlt; ++i)
                    for (int l = 0; l < nte; ++l) {
                        const int r = (c * nlt + i) * nte + l;
                        const int grow = (c * nt + test_.dof(m, i)) * nte + l;
                        for (int c2 = 0; c2 < D; ++c2)
                            for (int j = 0; j < nlu; ++j)
                                for (int k = 1; k < ntr; ++k) {
                                    const int col = (c2 * nlu + j) * (q_ + 1) + k - 1;
                                    jac->emplace_back(grow, unknown_index(c2, trial_.dof(m, j), k),
                                                      jloc(r, col));
                                }
                    }
        }
    }
}

Vector SlabSystem::residual(const SlabCoefficients& z) const
{
    if (z.components() != dim_ || z.spatial_dofs() != trial_.dof_count() ||
        z.temporal_nodes() != q_ + 2)
        throw std::invalid_argument("SlabSystem::residual: coefficient shape mismatch");
    Vector r = linear_full_ * z.values();
    assemble_nonlinear(z, &r, nullptr);
    return r;
}

SparseMatrix SlabSystem::jacobian(const SlabCoefficients& z) const
{
    if (z.components() != dim_ || z.spatial_dofs() != trial_.dof_count() ||
        z.temporal_nodes() != q_ + 2)
        throw std::invalid_argument("SlabSystem::jacobian: coefficient shape mismatch");
    std::vector<Eigen::Triplet<double>> triplets = linear_unknown_triplets_;
    assemble_nonlinear(z, nullptr, &triplets);
    SparseMatrix j(test_count(), unknown_count());
    j.setFromTriplets(triplets.begin(), triplets.end());
    return j;
}

NewtonReport SlabSystem::newton_solve(SlabCoefficients& z, double tolerance, int max_iterations)
{
    NewtonReport report;
    Vector r = residual(z);
    report.residual = inf_norm(r);
    const int n = trial_.dof_count();
    while (report.residual > tolerance) {
        if (report.iterations >= max_iterations) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << max_iterations
                << " iterations (residual " << report.residual << ")";
            throw SolverFailure(msg.str(), -1, report.residual, report.iterations);
        }
        const bool reuse = problem_.linear() && linear_factorised_;
        if (!reuse) {
            const SparseMatrix j = jacobian(z);
            if (!pattern_ready_) {
                lu_.analyzePattern(j);
                pattern_ready_ = true;
            }
            lu_.factorize(j);
            if (lu_.info() != Eigen::Success)
                throw SolverFailure("singular slab Jacobian", -1, report.residual,
                                    report.iterations);
            linear_factorised_ = problem_.linear();
        }
        const Vector step = lu_.solve(r);
        if (!step.allFinite())
            throw SolverFailure("singular slab Jacobian", -1, report.residual, report.iterations);
        for (int c = 0; c < dim_; ++c)
            for (int i = 0; i < n; ++i)
                for (int k = 1; k <= q_ + 1; ++k)
                    z(c, i, k) -= step[unknown_index(c, i, k)];
        ++report.iterations;
        r = residual(z);
        report.residual = inf_norm(r);

        const double scale = std::max(1.0, inf_norm(z.values()));
        if (report.residual > tolerance && inf_norm(step) <= 1e-14 * scale) {
            if (report.residual <= 10.0 * tolerance)
                break;
            std::ostringstream msg;
            msg << "Newton stagnated at residual " << report.residual;
            throw SolverFailure(msg.str(), -1, report.residual, report.iterations);
        }
    }
    return report;
}

Vector Trajectory::node_state(int n) const
{
    if (n == 0)
        return initial_state;
    return slabs[n - 1].node_state(q + 1);
}

SpatialSpace make_space(Scheme scheme, const MultisymplecticProblem& problem, int p, double dx)
{
    const double count = problem.domain_length / dx;
    const long long m = std::llround(count);
    if (m < 1 || std::abs(count - static_cast<double>(m)) > 1e-9 * count)
        throw std::invalid_argument("dx must divide the domain length " +
                                    std::to_string(problem.domain_length));
    return SpatialSpace(Partition1D::uniform(problem.domain_length, static_cast<int>(m), true), p,
                        trial_continuity(scheme));
}

Simulator::Simulator(Scheme scheme, MultisymplecticProblem problem, SolverConfig config)
    : scheme_(scheme), problem_(std::move(problem)), config_(config)
{
    config_.validate();
    const double ratio = config_.final_time / config_.dt;
    long long slabs = static_cast<long long>(std::ceil(ratio - 1e-9));
    slabs = std::max(1LL, slabs);
    times_.resize(slabs + 1);
    for (long long n = 0; n <= slabs; ++n)
        times_[n] = std::min(config_.final_time, n * config_.dt);
    times_.back() = config_.final_time;

    trajectory_.scheme = scheme_;
    trajectory_.q = config_.q;
    trajectory_.space =
        std::make_shared<SpatialSpace>(make_space(scheme_, problem_, config_.p, config_.dx));
    trajectory_.times = times_;
    trajectory_.initial_state =
        l2_project_spatial(*trajectory_.space, problem_.dimension, problem_.initial_condition);
}

SlabSystem& Simulator::system_for(double dt)
{
    // Slabs of equal length share one system; keyed on dt in units of 1e-12.
    const long long key = std::llround(dt * 1e12);
    auto it = systems_.find(key);
    if (it == systems_.end())
        it = systems_
                 .emplace(key, std::make_unique<SlabSystem>(scheme_, problem_, *trajectory_.space,
                                                            config_.q, dt))
                 .first;
    return *it->second;
}

const SlabCoefficients& Simulator::step()
{
    if (done())
        throw std::logic_error("Simulator::step: simulation already complete");
    const int n = slabs_done();
    const double dt = times_[n + 1] - times_[n];
    SlabSystem& system = system_for(dt);
    const Vector start = trajectory_.node_state(n);
    SlabCoefficients z(problem_.dimension, space().dof_count(), config_.q + 2);
    for (int k = 0; k < config_.q + 2; ++k)
        z.set_node_state(k, start);
    NewtonReport report;
    try {
        report = system.newton_solve(z, config_.newton_tolerance, config_.max_newton_iterations);
    } catch (const SolverFailure& f) {
        throw SolverFailure(std::string(f.what()) + " on slab " + std::to_string(n), n,
                            f.residual(), f.iterations());
    }
    trajectory_.slabs.push_back(std::move(z));
    trajectory_.newton.push_back(report);
    return trajectory_.slabs.back();
}

void Simulator::run()
{
    while (!done())
        step();
}

Trajectory run_simulation(Scheme scheme, const MultisymplecticProblem& problem,
                          const SolverConfig& config)
{
    Simulator sim(scheme, problem, config);
    sim.run();
    return sim.take_trajectory();
}

} // namespace mspde
