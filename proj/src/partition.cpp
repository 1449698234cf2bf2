#include "mspde/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mspde {

Partition1D::Partition1D(std::vector<double> node_coords, bool periodic)
    : nodes_(std::move(node_coords)), periodic_(periodic)
{
    if (nodes_.size() < 2)
        throw std::invalid_argument("Partition1D: need at least one element");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i + 1] > nodes_[i]))
            throw std::invalid_argument("Partition1D: nodes must be strictly increasing");
}

Partition1D Partition1D::uniform(double length, int count, bool periodic)
{
    if (!(length > 0.0))
        throw std::invalid_argument("Partition1D::uniform: length must be positive");
    if (count < 1)
        throw std::invalid_argument("Partition1D::uniform: element count must be positive");
    std::vector<double> nodes(count + 1);
    for (int m = 0; m <= count; ++m)
        nodes[m] = length * m / count;
    nodes[count] = length;
    return Partition1D(std::move(nodes), periodic);
}

std::pair<int, double> Partition1D::locate(double x) const
{
    const double a = nodes_.front();
    const double len = total_length();
    if (periodic_) {
        x = a + std::fmod(x - a, len);
        if (x < a)
            x += len;
    } else if (x < a || x > nodes_.back()) {
        throw std::invalid_argument("Partition1D::locate: point outside the mesh");
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    int m = static_cast<int>(it - nodes_.begin()) - 1;
    m = std::clamp(m, 0, element_count() - 1);
    const double xi = (x - nodes_[m]) / element_length(m);
    return {m, std::clamp(xi, 0.0, 1.0)};
}

} // namespace mspde
