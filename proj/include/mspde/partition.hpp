#pragma once

#include <vector>

namespace mspde {

/// Ordered 1D mesh. For a periodic partition the last node is identified
/// with the first modulo total_length().
class Partition1D
{
public:
    explicit Partition1D(std::vector<double> node_coords, bool periodic);

    /// `count` equal elements covering [0, length). Throws
    /// std::invalid_argument for non-positive length or count.
    static Partition1D uniform(double length, int count, bool periodic);

    int element_count() const { return static_cast<int>(nodes_.size()) - 1; }
    bool periodic() const { return periodic_; }
    double total_length() const { return nodes_.back() - nodes_.front(); }
    const std::vector<double>& nodes() const { return nodes_; }

    double element_start(int m) const { return nodes_[m]; }
    double element_length(int m) const { return nodes_[m + 1] - nodes_[m]; }

    /// Element containing x (wrapped into the domain when periodic) and the
    /// reference coordinate of x in that element.
    std::pair<int, double> locate(double x) const;

private:
    std::vector<double> nodes_;
    bool periodic_;
};

} // namespace mspde
