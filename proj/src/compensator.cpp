#include "jumprep/compensator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jumprep/quadrature.hpp"

namespace jumprep {

// ---------------------------------------------------------------------------
// MarkLaw
// ---------------------------------------------------------------------------

namespace {

// d = 1 regions as signed intervals (a, b]; annuli split into two branches.
std::vector<std::pair<double, double>> signed_intervals(const MarkRegion& region) {
    std::vector<std::pair<double, double>> out;
    for (const auto& b : region.bands) {
        switch (b.kind) {
            case MarkBand::Kind::Interval:
                out.emplace_back(b.lo, b.hi);
                break;
            case MarkBand::Kind::Annulus:
                out.emplace_back(b.lo, b.hi);    // positive branch (lo, hi]
                out.emplace_back(-b.hi, -b.lo);  // negative branch [-hi, -lo)
                break;
            case MarkBand::Kind::All:
                throw std::domain_error("mark region must be bounded away from 0");
        }
    }
    return out;
}

double interval_overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// integral of z^power over (a, b]
double power_integral(double a, double b, int power) {
    const double p = static_cast<double>(power) + 1.0;
    return (std::pow(b, p) - std::pow(a, p)) / p;
}

} // namespace

MarkLaw MarkLaw::point_masses(std::vector<std::pair<Mark, double>> ms) {
    if (ms.empty()) throw std::domain_error("MarkLaw: need at least one point mass");
    MarkLaw law;
    law.kind = Kind::PointMasses;
    law.masses = std::move(ms);
    const std::size_t d = law.masses.front().first.size();
    for (const auto& [z, w] : law.masses) {
        if (z.size() != d) throw std::domain_error("MarkLaw: mixed mark dimensions");
        if (!mark_finite(z) || !(mark_norm(z) > 0.0))
            throw std::domain_error("MarkLaw: marks must be finite and away from 0");
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::domain_error("MarkLaw: weights must be positive and finite");
    }
    return law;
}

MarkLaw MarkLaw::density_table(std::vector<double> edges, std::vector<double> density) {
    if (edges.size() < 2 || density.size() + 1 != edges.size())
        throw std::domain_error("MarkLaw: table needs C+1 edges and C densities");
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        if (!(edges[k] < edges[k + 1]))
            throw std::domain_error("MarkLaw: table edges must be increasing");
    if (edges.front() <= 0.0 && edges.back() >= 0.0)
        throw std::domain_error("MarkLaw: table support must exclude 0");
    for (double d : density)
        if (!(d >= 0.0) || !std::isfinite(d))
            throw std::domain_error("MarkLaw: densities must be nonnegative");
    MarkLaw law;
    law.kind = Kind::DensityTable;
    law.edges = std::move(edges);
    law.density = std::move(density);
    if (!(law.total_mass() > 0.0)) throw std::domain_error("MarkLaw: zero total mass");
    return law;
}

int MarkLaw::dim() const {
    return kind == Kind::PointMasses ? static_cast<int>(masses.front().first.size()) : 1;
}

double MarkLaw::total_mass() const {
    if (kind == Kind::PointMasses) {
        double s = 0.0;
        for (const auto& [z, w] : masses) s += w;
        return s;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < density.size(); ++c)
        s += density[c] * (edges[c + 1] - edges[c]);
    return s;
}

double MarkLaw::min_abs() const {
    if (kind == Kind::PointMasses) {
        double m = mark_norm(masses.front().first);
        for (const auto& [z, w] : masses) m = std::min(m, mark_norm(z));
        return m;
    }
    if (edges.front() > 0.0) return edges.front();
    return -edges.back();
}

double MarkLaw::region_mass(const MarkRegion& region) const {
    if (kind == Kind::PointMasses) {
        double s = 0.0;
        for (const auto& [z, w] : masses)
            if (region.contains(z)) s += w;
        return s;
    }
    double s = 0.0;
    for (const auto& [a, b] : signed_intervals(region))
        for (std::size_t c = 0; c < density.size(); ++c)
            s += density[c] * interval_overlap(edges[c], edges[c + 1], a, b);
    return s;
}

double MarkLaw::moment(int power, const MarkRegion& region) const {
    if (dim() != 1) throw std::domain_error("MarkLaw::moment: scalar marks only");
    if (kind == Kind::PointMasses) {
        double s = 0.0;
        for (const auto& [z, w] : masses)
            if (region.contains(z)) s += w * std::pow(z[0], power);
        return s;
    }
    double s = 0.0;
    for (const auto& [a, b] : signed_intervals(region))
        for (std::size_t c = 0; c < density.size(); ++c) {
            const double lo = std::max(edges[c], a);
            const double hi = std::min(edges[c + 1], b);
            if (hi > lo) s += density[c] * power_integral(lo, hi, power);
        }
    return s;
}

double MarkLaw::second_norm_moment(const MarkRegion& region) const {
    if (kind == Kind::PointMasses) {
        double s = 0.0;
        for (const auto& [z, w] : masses)
            if (region.contains(z)) {
                const double r = mark_norm(z);
                s += w * r * r;
            }
        return s;
    }
    return moment(2, region);
}

double MarkLaw::integrate(const std::function<double(const Mark&)>& g,
                          const MarkRegion& region) const {
    if (kind == Kind::PointMasses) {
        double s = 0.0;
        for (const auto& [z, w] : masses)
            if (region.contains(z)) s += w * g(z);
        return s;
    }
    double s = 0.0;
    Mark probe(1);
    for (const auto& [a, b] : signed_intervals(region))
        for (std::size_t c = 0; c < density.size(); ++c) {
            const double lo = std::max(edges[c], a);
            const double hi = std::min(edges[c + 1], b);
            if (hi > lo)
                s += density[c] * adaptive_simpson(
                                      [&](double z) {
                                          probe[0] = z;
                                          return g(probe);
                                      },
                                      lo, hi, 1e-10);
        }
    return s;
}

Mark MarkLaw::sample(RngStream& rng) const {
    const double u = rng.uniform() * total_mass();
    if (kind == Kind::PointMasses) {
        double acc = 0.0;
        for (const auto& [z, w] : masses) {
            acc += w;
            if (u <= acc) return z;
        }
        return masses.back().first;
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < density.size(); ++c) {
        const double cell = density[c] * (edges[c + 1] - edges[c]);
        if (u <= acc + cell && cell > 0.0) {
            const double frac = (u - acc) / cell;
            return scalar_mark(edges[c] + frac * (edges[c + 1] - edges[c]));
        }
        acc += cell;
    }
    return scalar_mark(0.5 * (edges[density.size() - 1] + edges[density.size()]));
}

MarkRegion MarkLaw::support_region() const {
    std::vector<MarkBand> bands;
    if (kind == Kind::PointMasses) {
        if (dim() == 1) {
            double pos_lo = 0.0, pos_hi = 0.0, neg_lo = 0.0, neg_hi = 0.0;
            bool has_pos = false, has_neg = false;
            for (const auto& [z, w] : masses) {
                const double v = z[0];
                if (v > 0.0) {
                    pos_lo = has_pos ? std::min(pos_lo, v) : v;
                    pos_hi = has_pos ? std::max(pos_hi, v) : v;
                    has_pos = true;
                } else {
                    neg_lo = has_neg ? std::min(neg_lo, v) : v;
                    neg_hi = has_neg ? std::max(neg_hi, v) : v;
                    has_neg = true;
                }
            }
            if (has_pos) bands.push_back(MarkBand::interval(0.5 * pos_lo, pos_hi));
            if (has_neg) bands.push_back(MarkBand::interval(neg_lo - 0.5 * (-neg_lo), neg_hi));
        } else {
            double rmin = mark_norm(masses.front().first), rmax = rmin;
            for (const auto& [z, w] : masses) {
                const double r = mark_norm(z);
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            bands.push_back(MarkBand::annulus(0.5 * rmin, rmax));
        }
    } else {
        const double width = edges.back() - edges.front();
        const double pad = 1e-9 * width;
        double lo = edges.front() - pad;
        if (edges.front() > 0.0) lo = std::max(lo, 0.5 * edges.front());
        bands.push_back(MarkBand::interval(lo, edges.back()));
    }
    return MarkRegion(std::move(bands));
}

MarkLaw MarkLaw::restricted_above(double threshold) const {
    if (!(threshold >= 0.0)) throw std::domain_error("MarkLaw: threshold must be >= 0");
    if (kind == Kind::PointMasses) {
        std::vector<std::pair<Mark, double>> kept;
        for (const auto& m : masses)
            if (mark_norm(m.first) > threshold) kept.push_back(m);
        if (kept.empty()) throw std::domain_error("MarkLaw: truncation removed all mass");
        return point_masses(std::move(kept));
    }
    // cut table cells at +-threshold
    std::vector<double> new_edges{edges.front()};
    std::vector<double> new_density;
    for (std::size_t c = 0; c < density.size(); ++c) {
        std::vector<double> cuts{edges[c + 1]};
        for (double cut : {-threshold, threshold})
            if (cut > edges[c] && cut < edges[c + 1]) cuts.push_back(cut);
        std::sort(cuts.begin(), cuts.end());
        for (double e : cuts) {
            const double mid = 0.5 * (new_edges.back() + e);
            new_density.push_back(std::abs(mid) > threshold ? density[c] : 0.0);
            new_edges.push_back(e);
        }
    }
    return density_table(std::move(new_edges), std::move(new_density));
}

// ---------------------------------------------------------------------------
// Intensity
// ---------------------------------------------------------------------------

Intensity Intensity::constant(double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::domain_error("Intensity: constant rate must be finite and >= 0");
    Intensity i;
    i.kind = Kind::Constant;
    i.rate = c;
    return i;
}

Intensity Intensity::deterministic(std::vector<double> times, std::vector<double> rates) {
    if (times.size() < 2 || times.size() != rates.size())
        throw std::domain_error("Intensity: table needs >= 2 matching knots");
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (!(times[k] < times[k + 1]))
            throw std::domain_error("Intensity: knot times must be increasing");
    for (double r : rates)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::domain_error("Intensity: rates must be finite and >= 0");
    Intensity i;
    i.kind = Kind::Deterministic;
    i.knot_times = std::move(times);
    i.knot_rates = std::move(rates);
    return i;
}

Intensity Intensity::path_dependent(double base, double slope) {
    if (!(base >= 0.0) || !(slope >= 0.0))
        throw std::domain_error("Intensity: counting feedback needs base, slope >= 0");
    Intensity i;
    i.kind = Kind::PathDependent;
    i.base = base;
    i.slope = slope;
    return i;
}

double Intensity::value(double t, const AtomicMeasure& j) const {
    switch (kind) {
        case Kind::Constant:
            return rate;
        case Kind::Deterministic: {
            if (t <= knot_times.front()) return knot_rates.front();
            if (t >= knot_times.back()) return knot_rates.back();
            auto it = std::upper_bound(knot_times.begin(), knot_times.end(), t);
            const std::size_t k = static_cast<std::size_t>(it - knot_times.begin()) - 1;
            const double w = (t - knot_times[k]) / (knot_times[k + 1] - knot_times[k]);
            return knot_rates[k] + w * (knot_rates[k + 1] - knot_rates[k]);
        }
        case Kind::PathDependent:
            return base + slope * static_cast<double>(j.count_upto(t, StopMode::OpenAtT));
    }
    return 0.0;
}

std::vector<double> Intensity::breakpoints(double t0, double t1, const AtomicMeasure& j) const {
    std::vector<double> pts;
    if (kind == Kind::Deterministic) {
        for (double t : knot_times)
            if (t > t0 && t < t1) pts.push_back(t);
    } else if (kind == Kind::PathDependent) {
        for (const auto& a : j.atoms()) {
            if (a.time >= t1) break;
            if (a.time > t0) pts.push_back(a.time);
        }
    }
    return pts;
}

double Intensity::integral(double t0, double t1, const AtomicMeasure& j) const {
    if (!(t1 >= t0)) throw std::domain_error("Intensity::integral: t1 < t0");
    if (t0 == t1) return 0.0;
    switch (kind) {
        case Kind::Constant:
            return rate * (t1 - t0);
        case Kind::Deterministic: {
            // trapezoid over the knots: exact for a piecewise-linear rate
            double acc = 0.0;
            double prev_t = t0;
            double prev_r = value(t0, j);
            for (double kt : knot_times) {
                if (kt <= t0) continue;
                if (kt >= t1) break;
                const double r = value(kt, j);
                acc += 0.5 * (prev_r + r) * (kt - prev_t);
                prev_t = kt;
                prev_r = r;
            }
            acc += 0.5 * (prev_r + value(t1, j)) * (t1 - prev_t);
            return acc;
        }
        case Kind::PathDependent: {
            double acc = 0.0;
            double seg_start = t0;
            for (const auto& a : j.atoms()) {
                if (a.time >= t1) break;
                if (a.time <= t0) continue;
                acc += value(0.5 * (seg_start + a.time), j) * (a.time - seg_start);
                seg_start = a.time;
            }
            acc += value(0.5 * (seg_start + t1), j) * (t1 - seg_start);
            return acc;
        }
    }
    return 0.0;
}

double Intensity::bound_from(double t, double T, const AtomicMeasure& j) const {
    switch (kind) {
        case Kind::Constant:
            return rate;
        case Kind::Deterministic: {
            double m = value(t, j);
            for (std::size_t k = 0; k < knot_times.size(); ++k)
                if (knot_times[k] > t && knot_times[k] <= T) m = std::max(m, knot_rates[k]);
            m = std::max(m, value(std::min(T, knot_times.back()), j));
            return m;
        }
        case Kind::PathDependent:
            // constant until the next accepted atom
            return base + slope * static_cast<double>(j.count_upto(t, StopMode::ClosedAtT));
    }
    return 0.0;
}

Intensity Intensity::scaled(double c) const {
    Intensity out = *this;
    out.rate *= c;
    out.base *= c;
    out.slope *= c;
    for (double& r : out.knot_rates) r *= c;
    return out;
}

// ---------------------------------------------------------------------------
// CompensatorModel
// ---------------------------------------------------------------------------

double CompensatorModel::mass(double t0, double t1, const MarkRegion& region,
                              const AtomicMeasure& j) const {
    if (!(t0 >= 0.0) || !(t1 >= t0) || t1 > j.horizon() + 1e-12)
        throw std::domain_error("compensator mass: need 0 <= t0 <= t1 <= horizon");
    require_away_from_zero(region, "compensator mass");
    if (t0 == t1) return 0.0;
    return intensity.integral(t0, t1, j) * mark_law.region_mass(region);
}

double CompensatorModel::time_integral(const std::function<double(double)>& g, double t0,
                                       double t1, const AtomicMeasure& j, double rel_tol) const {
    if (!(t1 >= t0)) throw std::domain_error("time_integral: t1 < t0");
    if (t0 == t1) return 0.0;
    std::vector<double> pts = intensity.breakpoints(t0, t1, j);
    pts.push_back(t1);
    double acc = 0.0;
    double lo = t0;
    for (double hi : pts) {
        if (hi <= lo) continue;
        acc += adaptive_simpson([&](double s) { return g(s) * intensity.value(s, j); }, lo, hi,
                                rel_tol);
        lo = hi;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// hitting_time
// ---------------------------------------------------------------------------

HittingResult hitting_time(const CompensatorModel& model, const AtomicMeasure& j,
                           const MarkRegion& Z, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("hitting_time: eps must be > 0");
    require_away_from_zero(Z, "hitting_time");
    const double T = j.horizon();
    const double mz = model.mark_law.region_mass(Z);
    constexpr double mass_tol = 1e-10;
    if (mz <= 0.0) return {T, false};

    auto mass_upto = [&](double t) { return model.intensity.integral(0.0, t, j) * mz; };
    if (mass_upto(T) < eps - mass_tol) return {T, false};

    // locate the covering smooth segment, then invert inside it
    std::vector<double> pts = model.intensity.breakpoints(0.0, T, j);
    pts.push_back(T);
    double lo = 0.0, acc = 0.0;
    for (double hi : pts) {
        if (hi <= lo) continue;
        const double seg = model.intensity.integral(lo, hi, j) * mz;
        if (acc + seg >= eps - mass_tol) {
            // constant rate on the segment: exact linear inversion
            if (model.intensity.kind != Intensity::Kind::Deterministic) {
                const double r = model.intensity.value(0.5 * (lo + hi), j) * mz;
                if (r <= 0.0) return {hi, true};
                return {std::min(hi, lo + (eps - acc) / r), true};
            }
            // bisection on the mass, monotone in t
            double a = lo, b = hi;
            while (b - a > 1e-15 * std::max(1.0, T)) {
                const double m = 0.5 * (a + b);
                const double v = acc + model.intensity.integral(lo, m, j) * mz;
                if (v >= eps)
                    b = m;
                else {
                    if (eps - v <= mass_tol && b - a < 1e-9) break;
                    a = m;
                }
            }
            return {b, true};
        }
        acc += seg;
        lo = hi;
    }
    return {T, true};
}

// ---------------------------------------------------------------------------
// tilt
// ---------------------------------------------------------------------------

void TiltSpec::validate() const {
    auto ok = [](double f) { return f > 0.0 && std::isfinite(f); };
    if (!ok(time_factor) || !ok(default_mark_factor))
        throw std::domain_error("TiltSpec: factors must be positive and finite");
    for (const auto& [band, f] : mark_factors)
        if (!ok(f)) throw std::domain_error("TiltSpec: factors must be positive and finite");
}

double TiltSpec::theta(double /*t*/, const Mark& z) const {
    for (const auto& [band, f] : mark_factors)
        if (band.contains(z)) return time_factor * f;
    return time_factor * default_mark_factor;
}

CompensatorModel tilt(const CompensatorModel& model, const TiltSpec& spec) {
    spec.validate();
    CompensatorModel out;
    out.intensity = model.intensity.scaled(spec.time_factor);

    auto mark_factor = [&](const Mark& z) {
        for (const auto& [band, f] : spec.mark_factors)
            if (band.contains(z)) return f;
        return spec.default_mark_factor;
    };

    if (model.mark_law.kind == MarkLaw::Kind::PointMasses) {
        auto masses = model.mark_law.masses;
        for (auto& [z, w] : masses) w *= mark_factor(z);
        out.mark_law = MarkLaw::point_masses(std::move(masses));
        return out;
    }

    // subdivide the table at band edges so the per-cell factor is exact
    std::vector<double> cuts;
    for (const auto& [band, f] : spec.mark_factors) {
        if (band.kind == MarkBand::Kind::Interval) {
            cuts.push_back(band.lo);
            cuts.push_back(band.hi);
        } else if (band.kind == MarkBand::Kind::Annulus) {
            cuts.push_back(band.lo);
            cuts.push_back(band.hi);
            cuts.push_back(-band.lo);
            cuts.push_back(-band.hi);
        }
    }
    const auto& law = model.mark_law;
    std::vector<double> new_edges{law.edges.front()};
    std::vector<double> new_density;
    Mark probe(1);
    for (std::size_t c = 0; c < law.density.size(); ++c) {
        std::vector<double> cell_cuts{law.edges[c + 1]};
        for (double cut : cuts)
            if (cut > law.edges[c] && cut < law.edges[c + 1]) cell_cuts.push_back(cut);
        std::sort(cell_cuts.begin(), cell_cuts.end());
        for (double e : cell_cuts) {
            probe[0] = 0.5 * (new_edges.back() + e);
            new_density.push_back(law.density[c] * mark_factor(probe));
            new_edges.push_back(e);
        }
    }
    out.mark_law = MarkLaw::density_table(std::move(new_edges), std::move(new_density));
    return out;
}

} // namespace jumprep
