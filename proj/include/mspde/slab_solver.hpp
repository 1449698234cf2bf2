#pragma once

#include "mspde/fem_spaces.hpp"
#include "mspde/problem.hpp"

#include <Eigen/SparseLU>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mspde {

/// The three space-time discretisations.
///
///  - CgPrimary: continuous degree-p space, test space P_q x CG_p; conserves
///    the discrete energy.
///  - CgMomentum: as CgPrimary with grad S replaced by its L2 projection
///    onto P_{q+1} x DG_p on each slab, eliminated element by element.
///  - DgPrimary: discontinuous degree-p space with the centred-flux
///    derivative G; conserves the discrete energy element by element.
enum class Scheme { CgPrimary, CgMomentum, DgPrimary };

std::string to_string(Scheme scheme);
/// "cg", "cg-momentum" or "dg". Throws std::invalid_argument.
Scheme scheme_from_string(const std::string& name);

/// Spatial trial space the scheme requires.
Continuity trial_continuity(Scheme scheme);

struct SolverConfig
{
    double newton_tolerance = 1e-12;
    int max_newton_iterations = 50;
    int q = 0;
    int p = 1;
    double dt = 0.1;
    double dx = 0.1;
    double final_time = 1.0;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

/// Newton did not reach the tolerance, or the Jacobian was singular.
class SolverFailure : public std::runtime_error
{
public:
    SolverFailure(const std::string& what, int slab, double residual, int iterations)
        : std::runtime_error(what), slab_(slab), residual_(residual), iterations_(iterations)
    {
    }
    int slab() const { return slab_; }
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    int slab_;
    double residual_;
    int iterations_;
};

struct NewtonReport
{
    int iterations = 0;
    double residual = 0.0;
};

/// Nonlinear system of one slab: residual, exact Jacobian and Newton solve.
///
/// Unknowns are the trial coefficients at temporal nodes 1..q+1; node 0 is
/// fixed by continuity with the previous slab (or the initial projection).
class SlabSystem
{
public:
    SlabSystem(Scheme scheme, const MultisymplecticProblem& problem, const SpatialSpace& space,
               int q, double dt);

    Scheme scheme() const { return scheme_; }
    const SpatialSpace& trial_space() const { return trial_; }
    const SpatialSpace& test_space() const { return test_; }
    int q() const { return q_; }
    double dt() const { return dt_; }

    int unknown_count() const;
    int test_count() const;
    int unknown_index(int c, int i, int k) const;

    /// r_j = int int (K Z_t + L DZ - N(Z)) . chi_j over the slab.
    Vector residual(const SlabCoefficients& z) const;
    /// d r / d (coefficients at nodes 1..q+1).
    SparseMatrix jacobian(const SlabCoefficients& z) const;

    /// Solves in place; node 0 of z is held fixed and nodes 1..q+1 are the
    /// initial guess. Throws SolverFailure (slab index -1).
    NewtonReport newton_solve(SlabCoefficients& z, double tolerance, int max_iterations);

private:
    void assemble_nonlinear(const SlabCoefficients& z, Vector* residual,
                            std::vector<Eigen::Triplet<double>>* jac) const;

    Scheme scheme_;
    MultisymplecticProblem problem_;
    SpatialSpace trial_;
    SpatialSpace test_;
    int q_;
    double dt_;
    int dim_;

    SparseMatrix linear_full_;  // test x all trial nodes
    std::vector<Eigen::Triplet<double>> linear_unknown_triplets_;

    // Quadrature tables for the nonlinear term.
    std::vector<double> tw_, xw_;
    Matrix trial_t_, test_t_;  // [point][basis]
    Matrix trial_x_, test_x_;

    Eigen::SparseLU<SparseMatrix> lu_;
    bool pattern_ready_ = false;
    bool linear_factorised_ = false;
};

/// Solved slabs plus the projected initial state.
struct Trajectory
{
    Scheme scheme = Scheme::CgPrimary;
    std::shared_ptr<SpatialSpace> space;
    int q = 0;
    std::vector<double> times;  ///< t_0 .. t_N
    Vector initial_state;
    std::vector<SlabCoefficients> slabs;
    std::vector<NewtonReport> newton;

    int slab_count() const { return static_cast<int>(slabs.size()); }
    TemporalSlab slab(int n) const { return TemporalSlab(times[n], times[n + 1], q); }
    /// Spatial coefficients at temporal node t_n.
    Vector node_state(int n) const;
};

/// Steps a simulation slab by slab.
class Simulator
{
public:
    Simulator(Scheme scheme, MultisymplecticProblem problem, SolverConfig config);

    const SpatialSpace& space() const { return *trajectory_.space; }
    const MultisymplecticProblem& problem() const { return problem_; }
    const SolverConfig& config() const { return config_; }

    int total_slabs() const { return static_cast<int>(times_.size()) - 1; }
    int slabs_done() const { return trajectory_.slab_count(); }
    bool done() const { return slabs_done() == total_slabs(); }

    /// Solves the next slab from the constant-in-time extension of the
    /// current end state. Throws SolverFailure carrying the slab index.
    const SlabCoefficients& step();
    void run();

    const Trajectory& trajectory() const { return trajectory_; }
    Trajectory take_trajectory() { return std::move(trajectory_); }

private:
    SlabSystem& system_for(double dt);

    Scheme scheme_;
    MultisymplecticProblem problem_;
    SolverConfig config_;
    std::vector<double> times_;
    Trajectory trajectory_;
    std::map<long long, std::unique_ptr<SlabSystem>> systems_;
};

/// Projects the initial data and advances to config.final_time.
Trajectory run_simulation(Scheme scheme, const MultisymplecticProblem& problem,
                          const SolverConfig& config);

/// Periodic uniform spatial space of the scheme's continuity for a problem.
SpatialSpace make_space(Scheme scheme, const MultisymplecticProblem& problem, int p, double dx);

} // namespace mspde
