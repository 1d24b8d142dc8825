#include "jumprep/cadlag_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumprep {

CadlagPath::CadlagPath(double horizon, std::vector<double> times, std::vector<double> values,
                       int dim)
    : horizon_(horizon), dim_(dim), times_(std::move(times)), values_(std::move(values)) {
    if (!(horizon > 0.0)) throw std::domain_error("CadlagPath: horizon must be > 0");
    if (dim_ < 1) throw std::domain_error("CadlagPath: dim must be >= 1");
    if (times_.empty() || times_.front() != 0.0)
        throw std::domain_error("CadlagPath: grid must start at time 0");
    if (values_.size() != times_.size() * static_cast<std::size_t>(dim_))
        throw std::domain_error("CadlagPath: value count does not match grid");
    for (std::size_t k = 0; k + 1 < times_.size(); ++k)
        if (!(times_[k] < times_[k + 1]))
            throw std::domain_error("CadlagPath: grid times must be strictly increasing");
    if (times_.back() > horizon_)
        throw std::domain_error("CadlagPath: grid exceeds horizon");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::domain_error("CadlagPath: non-finite value");
}

CadlagPath CadlagPath::constant(double horizon, double v) {
    return CadlagPath(horizon, {0.0}, {v}, 1);
}

std::size_t CadlagPath::floor_index(double t) const {
    if (t < 0.0 || t > horizon_)
        throw std::domain_error("CadlagPath: time outside [0, horizon]");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double CadlagPath::value(double t, int i) const {
    return values_[floor_index(t) * dim_ + i];
}

double CadlagPath::pre_value(double t, int i) const {
    if (t <= times_.front()) return values_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin());
    if (k == 0) return values_[static_cast<std::size_t>(i)];
    return values_[(k - 1) * dim_ + i];
}

CadlagPath CadlagPath::stopped(double t) const {
    const std::size_t k = floor_index(t);
    std::vector<double> times(times_.begin(), times_.begin() + k + 1);
    std::vector<double> values(values_.begin(), values_.begin() + (k + 1) * dim_);
    return CadlagPath(horizon_, std::move(times), std::move(values), dim_);
}

CadlagPath CadlagPath::bumped(double t, double h, int i) const {
    if (i < 0 || i >= dim_) throw std::domain_error("CadlagPath::bumped: bad coordinate");
    const std::size_t k = floor_index(t);
    // nodes strictly before t, then one node at t carrying the bumped value
    std::size_t keep = k + 1;
    if (times_[k] == t) keep = k;  // node at t itself is overwritten by the bump
    std::vector<double> times(times_.begin(), times_.begin() + keep);
    std::vector<double> values(values_.begin(), values_.begin() + keep * dim_);
    times.push_back(t);
    for (int c = 0; c < dim_; ++c) values.push_back(node_value(k, c) + (c == i ? h : 0.0));
    return CadlagPath(horizon_, std::move(times), std::move(values), dim_);
}

} // namespace jumprep
