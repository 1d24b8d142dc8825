#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumprep {

// Jump marks live in R^d with the origin removed. d = 1 everywhere in the
// shipped scenarios; the types carry general d.
using Mark = std::vector<double>;

inline Mark scalar_mark(double z) { return Mark{z}; }

inline double mark_norm(const Mark& z) {
    double s = 0.0;
    for (double c : z) s += c * c;
    return std::sqrt(s);
}

inline bool mark_finite(const Mark& z) {
    for (double c : z)
        if (!std::isfinite(c)) return false;
    return true;
}

// One band of a mark region.
//   Annulus:  lo < |z| <= hi            (any dimension)
//   Interval: lo <  z  <= hi, d = 1     (signed; used for one-sided laws)
//   All:      any nonzero mark          (not bounded away from the origin)
struct MarkBand {
    enum class Kind { Annulus, Interval, All };

    Kind kind = Kind::All;
    double lo = 0.0;
    double hi = 0.0;

    static MarkBand annulus(double lo, double hi) {
        if (!(lo >= 0.0) || !(hi > lo))
            throw std::domain_error("MarkBand::annulus: need 0 <= lo < hi");
        return MarkBand{Kind::Annulus, lo, hi};
    }

    static MarkBand interval(double lo, double hi) {
        if (!(hi > lo)) throw std::domain_error("MarkBand::interval: need lo < hi");
        if (lo <= 0.0 && hi >= 0.0)
            throw std::domain_error("MarkBand::interval: closure must exclude 0");
        return MarkBand{Kind::Interval, lo, hi};
    }

    static MarkBand all() { return MarkBand{Kind::All, 0.0, 0.0}; }

    bool contains(const Mark& z) const {
        switch (kind) {
            case Kind::All:
                return mark_norm(z) > 0.0;
            case Kind::Annulus: {
                const double r = mark_norm(z);
                return r > lo && r <= hi;
            }
            case Kind::Interval: {
                if (z.size() != 1)
                    throw std::domain_error("MarkBand: interval band requires scalar marks");
                return z[0] > lo && z[0] <= hi;
            }
        }
        return false;
    }

    // Distance from the closure of the band to the origin (0 when touching).
    double min_abs() const {
        switch (kind) {
            case Kind::All: return 0.0;
            case Kind::Annulus: return lo;
            case Kind::Interval:
                if (hi < 0.0) return -hi;
                return lo > 0.0 ? lo : 0.0;
        }
        return 0.0;
    }
};

// Finite union of bands.
struct MarkRegion {
    std::vector<MarkBand> bands;

    MarkRegion() = default;
    explicit MarkRegion(MarkBand b) : bands{b} {}
    explicit MarkRegion(std::vector<MarkBand> bs) : bands(std::move(bs)) {}

    static MarkRegion annulus(double alpha) {
        if (!(alpha >= 1.0)) throw std::domain_error("MarkRegion::annulus: alpha must be >= 1");
        return MarkRegion(MarkBand::annulus(1.0 / alpha, alpha));
    }

    static MarkRegion everything() { return MarkRegion(MarkBand::all()); }

    bool empty() const { return bands.empty(); }

    bool contains(const Mark& z) const {
        for (const auto& b : bands)
            if (b.contains(z)) return true;
        return false;
    }

    double min_abs() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& b : bands) m = std::min(m, b.min_abs());
        return bands.empty() ? 0.0 : m;
    }

    bool bounded_away_from_zero() const { return !bands.empty() && min_abs() > 0.0; }
};

inline void require_away_from_zero(const MarkRegion& r, const char* where) {
    if (!r.bounded_away_from_zero())
        throw std::domain_error(std::string(where) + ": mark region must be bounded away from 0");
}

} // namespace jumprep
