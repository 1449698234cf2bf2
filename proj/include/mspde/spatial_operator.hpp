#pragma once

#include "mspde/fem_spaces.hpp"

namespace mspde {

/// Left and right limits U_m^-, U_m^+ of a (possibly broken) field at mesh node m.
struct TraceValues
{
    int node = 0;
    State minus;
    State plus;
};

/// U^- - U^+.
State jump(const TraceValues& trace);
/// (U^- + U^+) / 2.
State avg(const TraceValues& trace);

/// Traces of a component-major field at node m; node m joins element m-1
/// (left, periodic wrap) and element m (right).
TraceValues trace_values(const SpatialSpace& space, const Vector& field, int components, int node);

/// Matrix B with (B U)_i = sum_m int_{e_m} U_x psi_i - jump_coefficient *
/// sum_m [U_m] {psi_m}, for trial U in `trial` and test psi_i in `test`.
/// Jump terms vanish identically for continuous trial spaces.
SparseMatrix weak_derivative_matrix(const SpatialSpace& test, const SpatialSpace& trial,
                                    double jump_coefficient = 1.0);

/// Discrete first derivative G on a discontinuous space with centred
/// (average) interface fluxes: int G(U) phi = sum int U_x phi - sum [U]{phi}.
///
/// Assembled once as a sparse matrix. The jump coefficient exists only so the
/// verification suite can confirm that a corrupted flux is detected.
class DerivativeOperator
{
public:
    explicit DerivativeOperator(const SpatialSpace& space, double jump_coefficient = 1.0);

    const SpatialSpace& space() const { return space_; }
    /// (B U)_i = int G(U) phi_i.
    const SparseMatrix& weak_matrix() const { return weak_; }

    /// G applied to a scalar coefficient vector.
    Vector apply(const Vector& field) const;
    /// G applied componentwise to a component-major vector.
    Vector apply(const Vector& field, int components) const;

private:
    SpatialSpace space_;
    SparseMatrix weak_;
};

/// Elementwise exact derivative, returned in the discontinuous space of
/// degree p-1 on the same mesh.
std::pair<SpatialSpace, Vector> broken_derivative(const SpatialSpace& space, const Vector& field,
                                                  int components = 1);

/// int_{e_m} U . V for component-major fields in one space.
double element_inner(const SpatialSpace& space, const Vector& u, const Vector& v, int components,
                     int element);
/// int_{S^1} U . V.
double inner(const SpatialSpace& space, const Vector& u, const Vector& v, int components);

/// Trace products entering the local identities of G on element m.
struct GBoundaryTerms
{
    double left_minus_plus = 0.0;   ///< U_m^- . V_m^+
    double left_plus_minus = 0.0;   ///< U_m^+ . V_m^-
    double right_minus_plus = 0.0;  ///< U_{m+1}^- . V_{m+1}^+
    double right_plus_minus = 0.0;  ///< U_{m+1}^+ . V_{m+1}^-
    double left_average = 0.0;      ///< {U_m . V_m}
    double right_average = 0.0;     ///< {U_{m+1} . V_{m+1}}

    /// Boundary contribution to int_{e_m} G(U).V + U.G(V).
    double skew_boundary() const
    {
        return 0.5 * (right_minus_plus + right_plus_minus) -
               0.5 * (left_minus_plus + left_plus_minus);
    }
};

GBoundaryTerms local_g_boundary_terms(const SpatialSpace& space, const Vector& u, const Vector& v,
                                      int components, int element);

/// int_{e_m} G(U).1 - ({U_{m+1}} - {U_m}).1
double local_orthogonality_residual(const DerivativeOperator& g, const Vector& u, int components,
                                    int element);
/// int_{e_m} G(U).V + U.G(V) minus its trace terms.
double local_skew_residual(const DerivativeOperator& g, const Vector& u, const Vector& v,
                           int components, int element);
/// Local product rule: int_{e_m} G(U.V) evaluated by applying G to the
/// scalar product in the degree-2p space, checked against the trace form.
double local_product_residual(const DerivativeOperator& g, const Vector& u, const Vector& v,
                              int components, int element);

/// The scalar field U.V represented exactly in the discontinuous space of
/// degree 2p.
std::pair<SpatialSpace, Vector> product_field(const SpatialSpace& space, const Vector& u,
                                              const Vector& v, int components);

} // namespace mspde
