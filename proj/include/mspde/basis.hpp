#pragma once

#include <vector>

namespace mspde {

/// Nodal Lagrange basis of P_r on the reference interval [0,1].
///
/// The default nodes are equispaced and include both endpoints (j/r); the
/// degree-0 basis sits at the midpoint. Node j carries basis function j.
class LagrangeBasis
{
public:
    explicit LagrangeBasis(int degree);
    explicit LagrangeBasis(std::vector<double> nodes);

    int degree() const { return static_cast<int>(nodes_.size()) - 1; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Value (derivative_order 0) or reference-coordinate derivative
    /// (derivative_order 1) of basis function j at x. Throws
    /// std::invalid_argument for j out of range or an unsupported order.
    double eval(int j, double x, int derivative_order = 0) const;

    /// All basis values (or first derivatives) at x.
    void eval_all(double x, int derivative_order, double* out) const;

private:
    std::vector<double> nodes_;
    std::vector<double> denominators_;
};

} // namespace mspde
