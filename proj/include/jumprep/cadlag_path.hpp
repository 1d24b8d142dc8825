#pragma once

#include <cstddef>
#include <vector>

namespace jumprep {

// Piecewise-constant right-continuous trajectory on a sorted time grid.
// value(t) is the node value at the last grid time <= t (step convention);
// pre_value(t) is the left limit at grid resolution.
class CadlagPath {
public:
    CadlagPath() = default;
    CadlagPath(double horizon, std::vector<double> times, std::vector<double> values, int dim = 1);

    static CadlagPath constant(double horizon, double v);

    double horizon() const { return horizon_; }
    int dim() const { return dim_; }
    std::size_t node_count() const { return times_.size(); }
    double node_time(std::size_t k) const { return times_[k]; }
    double node_value(std::size_t k, int i = 0) const { return values_[k * dim_ + i]; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& raw_values() const { return values_; }

    double value(double t, int i = 0) const;
    double pre_value(double t, int i = 0) const;

    // Path stopped at t: constant equal to value(t) on [t, horizon].
    CadlagPath stopped(double t) const;

    // Stopped at t, then shifted by +h in coordinate i on [t, horizon].
    CadlagPath bumped(double t, double h, int i = 0) const;

private:
    std::size_t floor_index(double t) const;

    double horizon_ = 1.0;
    int dim_ = 1;
    std::vector<double> times_;   // sorted, first entry 0
    std::vector<double> values_;  // node-major, dim_ entries per node
};

} // namespace jumprep
