#include "mspde/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mspde {

namespace {

std::vector<double> equispaced_nodes(int degree)
{
    if (degree < 0)
        throw std::invalid_argument("LagrangeBasis: negative degree");
    if (degree == 0)
        return {0.5};
    std::vector<double> nodes(degree + 1);
    for (int j = 0; j <= degree; ++j)
        nodes[j] = static_cast<double>(j) / degree;
    return nodes;
}

} // namespace

LagrangeBasis::LagrangeBasis(int degree)
    : LagrangeBasis(equispaced_nodes(degree))
{
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes)
    : nodes_(std::move(nodes))
{
    if (nodes_.empty())
        throw std::invalid_argument("LagrangeBasis: no nodes");
    denominators_.resize(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        double d = 1.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            if (k == j)
                continue;
            const double diff = nodes_[j] - nodes_[k];
            if (diff == 0.0)
                throw std::invalid_argument("LagrangeBasis: repeated node");
            d *= diff;
        }
        denominators_[j] = d;
    }
}

double LagrangeBasis::eval(int j, double x, int derivative_order) const
{
    if (j < 0 || j >= size())
        throw std::invalid_argument("LagrangeBasis::eval: index " + std::to_string(j) +
                                    " out of range for degree " + std::to_string(degree()));
    const int n = size();
    if (derivative_order == 0) {
        double v = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != j)
                v *= x - nodes_[k];
        return v / denominators_[j];
    }
    if (derivative_order == 1) {
        // Sum over the factor being differentiated.
        double sum = 0.0;
        for (int skip = 0; skip < n; ++skip) {
            if (skip == j)
                continue;
            double v = 1.0;
            for (int k = 0; k < n; ++k)
                if (k != j && k != skip)
                    v *= x - nodes_[k];
            sum += v;
        }
        return sum / denominators_[j];
    }
    throw std::invalid_argument("LagrangeBasis::eval: derivative order must be 0 or 1");
}

void LagrangeBasis::eval_all(double x, int derivative_order, double* out) const
{
    for (int j = 0; j < size(); ++j)
        out[j] = eval(j, x, derivative_order);
}

} // namespace mspde
