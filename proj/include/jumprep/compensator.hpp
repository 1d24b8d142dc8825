#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "jumprep/atoms.hpp"
#include "jumprep/mark_region.hpp"
#include "jumprep/rng.hpp"

namespace jumprep {

// Unnormalized finite measure on the mark space. Total mass scales the event
// rate: a model with intensity lambda and law nu jumps at rate
// lambda(t) * nu(R^d_0) and draws marks from the normalized law.
struct MarkLaw {
    enum class Kind { PointMasses, DensityTable };

    Kind kind = Kind::PointMasses;

    // PointMasses: (mark, weight) pairs, weights > 0
    std::vector<std::pair<Mark, double>> masses;

    // DensityTable (d = 1): piecewise-constant density over edges, 0 outside
    std::vector<double> edges;    // sorted, size C + 1, 0 not in [front, back]
    std::vector<double> density;  // size C, nonnegative

    static MarkLaw point_masses(std::vector<std::pair<Mark, double>> ms);
    static MarkLaw density_table(std::vector<double> edges, std::vector<double> density);

    int dim() const;
    double total_mass() const;
    double min_abs() const;  // smallest |z| carrying mass, > 0 by construction

    double region_mass(const MarkRegion& region) const;
    // integral of z^power over the region (d = 1)
    double moment(int power, const MarkRegion& region) const;
    // integral of |z|^2 over the region (any d)
    double second_norm_moment(const MarkRegion& region) const;
    // integral of g(z) against the law over the region (exact for point
    // masses, per-cell Gauss for tables)
    double integrate(const std::function<double(const Mark&)>& g, const MarkRegion& region) const;

    Mark sample(RngStream& rng) const;  // draw from the normalized law
    MarkRegion support_region() const;
    // keep only marks with |z| > threshold (small-jump truncation)
    MarkLaw restricted_above(double threshold) const;
};

// Predictable rate lambda(t). The path-dependent kind is counting feedback on
// the strictly prior atom count, so the compensator stays piecewise linear.
struct Intensity {
    enum class Kind { Constant, Deterministic, PathDependent };

    Kind kind = Kind::Constant;
    double rate = 0.0;                           // Constant
    std::vector<double> knot_times, knot_rates;  // Deterministic, piecewise linear
    double base = 0.0, slope = 0.0;              // PathDependent: base + slope * j([0,t) x R^d_0)

    static Intensity constant(double c);
    static Intensity deterministic(std::vector<double> times, std::vector<double> rates);
    static Intensity path_dependent(double base, double slope);

    double value(double t, const AtomicMeasure& j) const;
    double integral(double t0, double t1, const AtomicMeasure& j) const;
    // dominating rate valid on (t, T] as long as no further atom is appended
    double bound_from(double t, double T, const AtomicMeasure& j) const;
    // rate discontinuity/kink locations inside (t0, t1)
    std::vector<double> breakpoints(double t0, double t1, const AtomicMeasure& j) const;
    Intensity scaled(double c) const;
};

struct CompensatorModel {
    Intensity intensity;
    MarkLaw mark_law;

    // mu((t0, t1] x region, j); exact in time for every intensity kind
    double mass(double t0, double t1, const MarkRegion& region, const AtomicMeasure& j) const;

    // integral of g(s) * lambda(s) ds over (t0, t1], adaptive per smooth segment
    double time_integral(const std::function<double(double)>& g, double t0, double t1,
                         const AtomicMeasure& j, double rel_tol = 1e-8) const;

    double total_rate(double t, const AtomicMeasure& j) const {
        return intensity.value(t, j) * mark_law.total_mass();
    }
};

struct HittingResult {
    double time = 0.0;
    bool reached = false;
};

// Smallest t in [0, T] with mu([0, t] x Z) >= eps; (T, not reached) when the
// total mass falls short. Mass tolerance 1e-10.
HittingResult hitting_time(const CompensatorModel& model, const AtomicMeasure& j,
                           const MarkRegion& Z, double eps);

// Multiplier theta(t, z) = time_factor * band factor, bounded and positive.
struct TiltSpec {
    double time_factor = 1.0;
    std::vector<std::pair<MarkBand, double>> mark_factors;  // first matching band wins
    double default_mark_factor = 1.0;

    double theta(double t, const Mark& z) const;
    void validate() const;
};

// Model whose compensator is theta * mu. Constant-in-time part scales the
// intensity; the mark part reweights the law (tables are subdivided at band
// edges so the reweighting is exact).
CompensatorModel tilt(const CompensatorModel& model, const TiltSpec& spec);

} // namespace jumprep
