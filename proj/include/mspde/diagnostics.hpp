#pragma once

#include "mspde/slab_solver.hpp"
#include "mspde/spatial_operator.hpp"

#include <optional>
#include <vector>

namespace mspde {

/// Pointwise momentum and energy densities and fluxes.
struct FluxDensity
{
    double momentum_density = 0.0;  ///< 1/2 DZ . K Z
    double momentum_flux = 0.0;     ///< 1/2 Z . K Z_t - S(Z)
    double energy_density = 0.0;    ///< 1/2 Z . L DZ - S(Z)
    double energy_flux = 0.0;       ///< 1/2 Z_t . L Z
};

FluxDensity densities_fluxes(const MultisymplecticProblem& problem, const State& z,
                             const State& dz, const State& zt);

/// Read access to a solved trajectory: values, time derivatives and the
/// scheme's spatial derivative DZ (Z_x for continuous spaces, G(Z) for
/// discontinuous ones) at reference points of a slab.
class TrajectoryFields
{
public:
    TrajectoryFields(const MultisymplecticProblem& problem, const Trajectory& trajectory);
    /// Both arguments are held by reference.
    TrajectoryFields(MultisymplecticProblem&&, const Trajectory&) = delete;
    TrajectoryFields(const MultisymplecticProblem&, Trajectory&&) = delete;

    const MultisymplecticProblem& problem() const { return *problem_; }
    const Trajectory& trajectory() const { return *trajectory_; }
    const SpatialSpace& space() const { return *trajectory_->space; }
    int dimension() const { return problem_->dimension; }
    bool discontinuous() const { return space().discontinuous(); }
    /// Present only for discontinuous spaces.
    const DerivativeOperator* derivative_operator() const
    {
        return g_ ? &*g_ : nullptr;
    }

    State value(int n, double tau, int m, double xi) const;
    State time_derivative(int n, double tau, int m, double xi) const;
    State space_derivative(int n, double tau, int m, double xi) const;
    /// Time derivative of DZ.
    State space_time_derivative(int n, double tau, int m, double xi) const;

    /// Spatial coefficients of DZ for a node state, in the trial space
    /// (discontinuous case only).
    Vector apply_g(const Vector& state) const;

    /// DZ evaluated from spatial coefficients (used at temporal nodes).
    State state_value(const Vector& state, int m, double xi) const;
    State state_derivative(const Vector& state, const Vector* g_state, int m, double xi) const;

    /// (t, x) to slab-local coordinates; x is wrapped periodically.
    FluxDensity at(int n, double t, double x) const;

private:
    const MultisymplecticProblem* problem_;
    const Trajectory* trajectory_;
    std::optional<DerivativeOperator> g_;
    std::vector<SlabCoefficients> g_slabs_;
};

/// Spatial integrals at the temporal nodes t_0..t_N.
struct InvariantSeries
{
    std::vector<double> times;
    std::vector<std::vector<double>> mass;  ///< [component][node]
    std::vector<double> momentum;
    std::vector<double> energy;

    std::vector<double> dev_mass(int component) const;
    std::vector<double> dev_momentum() const;
    std::vector<double> dev_energy() const;
};

InvariantSeries global_invariants(const TrajectoryFields& fields);

/// |I(t_n) - I(0)| for every n.
std::vector<double> deviation(const std::vector<double>& series);
double max_abs(const std::vector<double>& values);

/// Per-slab global balance. For the primary schemes the momentum entry is
/// the consistent law Delta int G - int int W with W = grad S . P(DZ); for
/// the momentum scheme it is the plain change Delta int G.
struct SlabLaw
{
    double energy_change = 0.0;
    double momentum_change = 0.0;
    double w_integral = 0.0;
    double momentum_residual = 0.0;
};

std::vector<SlabLaw> slab_laws(const TrajectoryFields& fields, const InvariantSeries& series);

/// W = grad S(Z) . P(DZ) integrated over slab n and, when element >= 0, over
/// element `element` only. P projects DZ onto the slab's primary test space.
double w_integral(const TrajectoryFields& fields, int n, int element = -1);

struct LocalResidual
{
    double momentum = 0.0;
    double energy = 0.0;
};

/// Element-local space-time balance on slab n (discontinuous scheme only):
/// change of the element integral plus interface fluxes and jump terms.
LocalResidual local_conservation_residuals(const TrajectoryFields& fields, int n, int element);

/// sqrt(int_0^{t_N} int |Z_c - z_c|^2) per component over the first
/// `slabs` slabs (all when negative). Throws std::invalid_argument when the
/// problem has no exact solution.
std::vector<double> bochner_error(const TrajectoryFields& fields, int slabs = -1);

/// Experimental orders of convergence; NaN where an error is not positive.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

/// Max |W - D U| over the q+1 Gauss points of every slab, where D U is the
/// spatial L2 projection of U_x (continuous) or G(U) (discontinuous).
/// Requires a wave-type problem. Throws std::invalid_argument otherwise.
double auxiliary_identity_residual(const TrajectoryFields& fields);

/// Energy-stability monitor for wave problems:
///   lhs_n = ||V||^2 + ||D U||^2 + int V(U) at t_n,
///   bound = ||V_0||^2 + ||D U_0||^2 + 2 int V(U_0) with the unprojected
///   derivative of the initial data for continuous spaces.
struct StabilityReport
{
    double bound = 0.0;
    std::vector<double> lhs;
    double max_slack() const;  ///< max(lhs_n - bound)
};

StabilityReport stability_monitor(const TrajectoryFields& fields);

} // namespace mspde
