#pragma once

#include <cstddef>
#include <vector>

#include "jumprep/mark_region.hpp"

namespace jumprep {

// One weighted point of an integer-valued measure: a (time, mark) pair.
struct Atom {
    double time = 0.0;
    Mark mark;
};

// j_t keeps atoms with time <= t, j_{t-} keeps time < t.
enum class StopMode { ClosedAtT, OpenAtT };

// Cylindrical count window: cumulative over [0, t] (default reading) or the
// literal single-instant count at time t.
enum class CountWindow { Cumulative, InstantOnly };

// Annulus 1/alpha < |z| <= alpha, alpha >= 1.
struct AnnulusSpec {
    double alpha = 1.0;
};

// Finite simple integer-valued measure on [0, T] x R^d_0, stored as an
// ordered atom list. Immutable after construction; ties in time keep their
// insertion order. Counting evaluation is exact.
class AtomicMeasure {
public:
    AtomicMeasure() = default;
    explicit AtomicMeasure(double horizon);
    AtomicMeasure(double horizon, std::vector<Atom> atoms);

    double horizon() const { return horizon_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    // Mark dimension; 0 when the measure has no atoms.
    int dim() const;

    // Exact count of atoms in (time window) x (mark region).
    long count(double t0, bool include_t0, double t1, bool include_t1,
               const MarkRegion& region) const;

    // Count of atoms up to t over all marks.
    long count_upto(double t, StopMode mode) const;

    // Index of the first atom with time > t (ClosedAtT) or >= t (OpenAtT).
    std::size_t upper_index(double t, StopMode mode) const;

private:
    double horizon_ = 1.0;
    std::vector<Atom> atoms_;
};

// j restricted to [0, t] or [0, t); horizon preserved, idempotent.
AtomicMeasure restrict(const AtomicMeasure& j, double t, StopMode mode);

// j + delta_{(t, z)}; the input is untouched. Multiplicity is allowed.
AtomicMeasure add_atom(const AtomicMeasure& j, double t, Mark z);

// Number of atoms in the annulus band, cumulative over [0, t] by default.
long cylinder_count(const AtomicMeasure& j, double t, AnnulusSpec spec,
                    CountWindow window = CountWindow::Cumulative);

} // namespace jumprep
