#include "jumprep/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumprep {

// ---------------------------------------------------------------------------
// LevyParams
// ---------------------------------------------------------------------------

MarkRegion LevyParams::compensated_region() const {
    if (compensate_threshold <= 0.0) return MarkRegion{};
    return MarkRegion(MarkBand::annulus(0.0, compensate_threshold));
}

MarkRegion LevyParams::raw_region() const {
    if (!std::isfinite(compensate_threshold))
        return MarkRegion{};
    if (compensate_threshold <= 0.0) return MarkRegion::everything();
    return MarkRegion(
        MarkBand::annulus(compensate_threshold, std::numeric_limits<double>::infinity()));
}

double LevyParams::compensation_rate() const {
    const MarkRegion region = compensated_region();
    if (region.empty()) return 0.0;
    return mark_law.moment(1, region);
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

AtomicMeasure sample_prm(const CompensatorModel& model, double T, RngStream& rng) {
    if (!(T > 0.0)) throw std::domain_error("sample_prm: horizon must be > 0");
    const double nu_total = model.mark_law.total_mass();
    std::vector<Atom> atoms;
    AtomicMeasure realized(T);
    double t = 0.0;
    long accepted = 0;
    while (true) {
        const double bound = model.intensity.bound_from(t, T, realized) * nu_total;
        if (!(bound > 0.0)) break;
        if (bound > 1e12)
            throw std::runtime_error("sample_prm: dominating rate overflow");
        t += rng.exponential(bound);
        if (t > T) break;
        const double accept = model.intensity.value(t, realized) * nu_total / bound;
        if (rng.uniform() <= accept) {
            atoms.push_back(Atom{t, model.mark_law.sample(rng)});
            realized = AtomicMeasure(T, atoms);
            if (++accepted > 5'000'000)
                throw std::runtime_error("sample_prm: runaway atom count");
        }
    }
    return realized;
}

Scenario sample_levy(const LevyParams& params, double T, int n_steps, RngStream& rng) {
    if (n_steps < 2) throw std::domain_error("sample_levy: need at least 2 grid steps");
    if (!(params.sigma >= 0.0)) throw std::domain_error("sample_levy: sigma must be >= 0");
    const double sqrt_dt = std::sqrt(T / n_steps);
    std::vector<double> times(n_steps + 1), values(n_steps + 1);
    times[0] = 0.0;
    values[0] = 0.0;
    double w = 0.0;
    for (int k = 1; k <= n_steps; ++k) {
        w += params.sigma * sqrt_dt * rng.normal();
        times[k] = T * static_cast<double>(k) / n_steps;
        values[k] = params.gamma * times[k] + w;
    }
    Scenario sc;
    sc.x = CadlagPath(T, std::move(times), std::move(values));
    sc.model = CompensatorModel{Intensity::constant(1.0), params.mark_law};
    sc.j = sample_prm(sc.model, T, rng);
    return sc;
}

Scenario make_scenario(const LevyParams& params, double T, int n_steps, std::uint64_t master_seed,
                       std::uint64_t path_index) {
    RngStream rng(master_seed, path_index);
    Scenario sc = sample_levy(params, T, n_steps, rng);
    sc.seed = path_index;
    return sc;
}

AtomicMeasure truncate_small_jumps(const AtomicMeasure& j, int n) {
    if (n < 1) throw std::domain_error("truncate_small_jumps: n must be >= 1");
    const double threshold = 1.0 / static_cast<double>(n);
    std::vector<Atom> kept;
    for (const auto& a : j.atoms())
        if (mark_norm(a.mark) > threshold) kept.push_back(a);
    return AtomicMeasure(j.horizon(), std::move(kept));
}

// ---------------------------------------------------------------------------
// LevyPathState
// ---------------------------------------------------------------------------

LevyPathState::LevyPathState(const Scenario& sc, const LevyParams& params) {
    horizon_ = sc.j.horizon();
    const double comp = params.compensation_rate();
    linear_drift_ = (params.sigma == 0.0);
    drift_rate_ = params.gamma - comp;

    // merged node set: grid times plus atom times
    times_.assign(sc.x.times().begin(), sc.x.times().end());
    for (const auto& a : sc.j.atoms()) times_.push_back(a.time);
    std::sort(times_.begin(), times_.end());
    times_.erase(std::unique(times_.begin(), times_.end()), times_.end());

    const std::size_t n = times_.size();
    value_.resize(n);
    pre_value_.resize(n);
    max_.resize(n);
    pre_max_.resize(n);

    double jump_sum = 0.0;
    std::size_t atom_idx = 0;
    const auto& atoms = sc.j.atoms();
    for (std::size_t k = 0; k < n; ++k) {
        const double s = times_[k];
        const double jumps_before = jump_sum;
        while (atom_idx < atoms.size() && atoms[atom_idx].time == s) {
            jump_sum += atoms[atom_idx].mark[0];
            ++atom_idx;
        }
        if (linear_drift_) {
            pre_value_[k] = drift_rate_ * s + jumps_before;
            value_[k] = drift_rate_ * s + jump_sum;
            if (k == 0) {
                pre_max_[k] = pre_value_[k];
                max_[k] = std::max(pre_value_[k], value_[k]);
            } else {
                // the segment before s is linear, so its max sits at an endpoint
                const double seg_max = std::max(value_[k - 1], pre_value_[k]);
                pre_max_[k] = std::max(max_[k - 1], seg_max);
                max_[k] = std::max(pre_max_[k], value_[k]);
            }
        } else {
            value_[k] = sc.x.value(s) + jump_sum - comp * s;
            if (k == 0) {
                pre_value_[k] = value_[k];
                pre_max_[k] = value_[k];
                max_[k] = value_[k];
            } else {
                pre_value_[k] = value_[k - 1];
                pre_max_[k] = max_[k - 1];
                max_[k] = std::max(max_[k - 1], value_[k]);
            }
        }
    }
}

std::size_t LevyPathState::floor_index(double t) const {
    if (t < 0.0 || t > horizon_ + 1e-12)
        throw std::domain_error("LevyPathState: time outside [0, horizon]");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double LevyPathState::value(double t) const {
    const std::size_t k = floor_index(t);
    if (linear_drift_) return value_[k] + drift_rate_ * (t - times_[k]);
    return value_[k];
}

double LevyPathState::pre_value(double t) const {
    const std::size_t k = floor_index(t);
    if (times_[k] == t) return pre_value_[k];
    if (linear_drift_) return value_[k] + drift_rate_ * (t - times_[k]);
    return value_[k];
}

double LevyPathState::max_upto(double t) const {
    const std::size_t k = floor_index(t);
    if (linear_drift_) return std::max(max_[k], value(t));
    return max_[k];
}

double LevyPathState::pre_max(double t) const {
    const std::size_t k = floor_index(t);
    if (times_[k] == t) return pre_max_[k];
    if (linear_drift_) return std::max(max_[k], pre_value(t));
    return max_[k];
}

} // namespace jumprep
