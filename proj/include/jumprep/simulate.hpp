#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "jumprep/atoms.hpp"
#include "jumprep/cadlag_path.hpp"
#include "jumprep/compensator.hpp"
#include "jumprep/rng.hpp"

namespace jumprep {

// Levy triplet at desk scale: drift, volatility and a finite-mass jump law.
// Marks with |z| < compensate_threshold enter the process compensated; larger
// marks enter raw. The threshold sits at 1 unless a case moves it to
// +infinity (fully compensated) or 0 (raw compound Poisson).
struct LevyParams {
    double gamma = 0.0;
    double sigma = 0.0;
    MarkLaw mark_law;
    double compensate_threshold = 1.0;

    MarkRegion compensated_region() const;
    MarkRegion raw_region() const;
    // drift rate removed from the jump sum by compensation (d = 1)
    double compensation_rate() const;
};

// One simulated path: diffusion component on a uniform grid, the jump measure
// and the compensator model it was drawn from. Reproducible from
// (params, master seed, stream index).
struct Scenario {
    CadlagPath x;
    AtomicMeasure j;
    CompensatorModel model;
    std::uint64_t seed = 0;
};

// Poisson/Cox random measure by thinning against the local dominating rate.
// Works unchanged for constant, deterministic and counting-feedback
// intensities; the feedback case re-evaluates the bound after each accepted
// atom.
AtomicMeasure sample_prm(const CompensatorModel& model, double T, RngStream& rng);

// Diffusion component gamma*t + sigma*W on a uniform grid plus compound
// Poisson atoms. Compensation is a property of the model, not of x.
Scenario sample_levy(const LevyParams& params, double T, int n_steps, RngStream& rng);

Scenario make_scenario(const LevyParams& params, double T, int n_steps, std::uint64_t master_seed,
                       std::uint64_t path_index);

// Atoms with |mark| > 1/n kept; monotone in n.
AtomicMeasure truncate_small_jumps(const AtomicMeasure& j, int n);

// Full process value X(t) on the refined node set (grid plus atom times),
// with running maxima and left limits. The diffusion part follows the path's
// step convention; for sigma = 0 the drift is treated as exactly linear
// between events, which keeps running maxima exact.
class LevyPathState {
public:
    LevyPathState(const Scenario& sc, const LevyParams& params);

    double horizon() const { return horizon_; }
    const std::vector<double>& times() const { return times_; }

    double value(double t) const;      // X(t)
    double pre_value(double t) const;  // X(t-)
    double max_upto(double t) const;   // sup_{s <= t} X(s)
    double pre_max(double t) const;    // sup_{s < t} X(s)

    std::size_t node_count() const { return times_.size(); }
    double node_time(std::size_t k) const { return times_[k]; }
    double node_value(std::size_t k) const { return value_[k]; }
    double node_max(std::size_t k) const { return max_[k]; }
    double node_pre_value(std::size_t k) const { return pre_value_[k]; }
    double node_pre_max(std::size_t k) const { return pre_max_[k]; }

private:
    std::size_t floor_index(double t) const;

    double horizon_ = 1.0;
    bool linear_drift_ = false;  // sigma == 0: drift handled analytically
    double drift_rate_ = 0.0;
    std::vector<double> times_;
    std::vector<double> value_, pre_value_;
    std::vector<double> max_, pre_max_;
};

} // namespace jumprep
