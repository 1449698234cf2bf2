#pragma once

#include "mspde/basis.hpp"
#include "mspde/partition.hpp"
#include "mspde/types.hpp"

#include <functional>
#include <memory>

namespace mspde {

enum class Continuity { Continuous, Discontinuous };

/// Degree-p piecewise polynomial space on a periodic 1D mesh.
///
/// Continuous spaces identify the shared endpoint nodes of neighbouring
/// elements (M*p dofs); discontinuous spaces keep them separate
/// (M*(p+1) dofs). Copies share the cached mass matrix and its factorisation.
class SpatialSpace
{
public:
    SpatialSpace(Partition1D partition, int degree, Continuity continuity);

    const Partition1D& partition() const;
    const LagrangeBasis& basis() const;
    int degree() const;
    Continuity continuity() const;
    bool discontinuous() const { return continuity() == Continuity::Discontinuous; }

    int dof_count() const;
    int element_count() const;
    int local_size() const { return degree() + 1; }
    double element_length(int m) const;

    /// Global dof of local node j on element m.
    int dof(int element, int local) const;

    const SparseMatrix& mass_matrix() const;
    /// Applies the inverse mass matrix (one scalar component).
    Vector solve_mass(const Vector& rhs) const;

    /// Scalar field value at reference coordinate xi of element m; order 1
    /// gives the physical x-derivative.
    double value(const Vector& coeffs, int element, double xi, int order = 0) const;
    /// Scalar field value at physical x (wrapped periodically).
    double value_at(const Vector& coeffs, double x) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Component c of a component-major multi-field vector.
inline auto component(Vector& v, int c, int dofs) { return v.segment(c * dofs, dofs); }
inline auto component(const Vector& v, int c, int dofs) { return v.segment(c * dofs, dofs); }

/// One temporal element [t_start, t_end] with degree-(q+1) trial and degree-q
/// test bases on the reference interval.
class TemporalSlab
{
public:
    TemporalSlab(double t_start, double t_end, int q);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double length() const { return t_end_ - t_start_; }
    int q() const { return q_; }
    int trial_nodes() const { return q_ + 2; }
    int test_size() const { return q_ + 1; }
    const LagrangeBasis& trial_basis() const { return trial_; }
    const LagrangeBasis& test_basis() const { return test_; }

    /// Reference time of physical t; throws std::invalid_argument outside the slab.
    double reference_time(double t) const;

private:
    double t_start_;
    double t_end_;
    int q_;
    LagrangeBasis trial_;
    LagrangeBasis test_;
};

/// Space-time coefficients of a D-component field on one slab.
///
/// Layout is component-major, then spatial dof, then temporal node. The same
/// container holds trial-space (q+2 nodes) and test-space (q+1 nodes) fields.
class SlabCoefficients
{
public:
    SlabCoefficients() = default;
    SlabCoefficients(int components, int spatial_dofs, int temporal_nodes);

    int components() const { return components_; }
    int spatial_dofs() const { return spatial_dofs_; }
    int temporal_nodes() const { return temporal_nodes_; }

    int index(int c, int i, int k) const { return (c * spatial_dofs_ + i) * temporal_nodes_ + k; }
    double& operator()(int c, int i, int k) { return values_[index(c, i, k)]; }
    double operator()(int c, int i, int k) const { return values_[index(c, i, k)]; }

    Vector& values() { return values_; }
    const Vector& values() const { return values_; }

    /// Spatial coefficients (component-major) at temporal node k.
    Vector node_state(int k) const;
    void set_node_state(int k, const Vector& state);

private:
    int components_ = 0;
    int spatial_dofs_ = 0;
    int temporal_nodes_ = 0;
    Vector values_;
};

/// Field sampled element-locally: (reference time, element, reference x).
using SpaceTimeSampler = std::function<State(double tau, int element, double xi)>;

/// Evaluates a slab field at reference time tau, element m, reference xi.
/// `temporal` is the basis the coefficients are expressed in (trial or test);
/// time_order/space_order select derivatives (physical units).
State evaluate(const SpatialSpace& space, const LagrangeBasis& temporal, double slab_length,
               const SlabCoefficients& coeffs, double tau, int element, double xi,
               int time_order = 0, int space_order = 0);

/// Trial-space field value at physical (t, x). Throws std::invalid_argument
/// when t lies outside the slab.
State eval_field(const SpatialSpace& space, const TemporalSlab& slab,
                 const SlabCoefficients& coeffs, double t, double x);

/// L2 projection of a D-component function of x into the spatial space.
/// integrand_degree < 0 marks a non-polynomial integrand (capped rule).
Vector l2_project_spatial(const SpatialSpace& space, int components,
                          const std::function<State(double x)>& f, int integrand_degree = -1);

/// Element-local variant of l2_project_spatial.
Vector l2_project_spatial(const SpatialSpace& space, int components,
                          const std::function<State(int element, double xi)>& f,
                          int integrand_degree = -1);

/// L2 projection onto P_q(slab) x space (the test space of the slab).
/// Returns test-space coefficients (q+1 temporal nodes). The degree hints set
/// the quadrature in time and space (negative: capped rule).
SlabCoefficients l2_project_spacetime(const SpatialSpace& space, const TemporalSlab& slab,
                                      int components, const SpaceTimeSampler& field,
                                      int time_degree = -1, int space_degree = -1);

/// Physical-coordinate convenience overload of l2_project_spacetime.
SlabCoefficients l2_project_spacetime(const SpatialSpace& space, const TemporalSlab& slab,
                                      int components,
                                      const std::function<State(double t, double x)>& field,
                                      int time_degree = -1, int space_degree = -1);

} // namespace mspde
