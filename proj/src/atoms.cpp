#include "jumprep/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumprep {

namespace {

void validate_atom(const Atom& a, double horizon) {
    if (!std::isfinite(a.time) || a.time < 0.0 || a.time > horizon)
        throw std::domain_error("AtomicMeasure: atom time outside [0, horizon]");
    if (a.mark.empty() || !mark_finite(a.mark))
        throw std::domain_error("AtomicMeasure: atom mark must be finite and nonempty");
    if (!(mark_norm(a.mark) > 0.0))
        throw std::domain_error("AtomicMeasure: marks live in R^d without the origin");
}

} // namespace

AtomicMeasure::AtomicMeasure(double horizon) : horizon_(horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("AtomicMeasure: horizon must be > 0");
}

AtomicMeasure::AtomicMeasure(double horizon, std::vector<Atom> atoms)
    : horizon_(horizon), atoms_(std::move(atoms)) {
    if (!(horizon > 0.0)) throw std::domain_error("AtomicMeasure: horizon must be > 0");
    for (const auto& a : atoms_) validate_atom(a, horizon_);
    if (!atoms_.empty()) {
        const std::size_t d = atoms_.front().mark.size();
        for (const auto& a : atoms_)
            if (a.mark.size() != d)
                throw std::domain_error("AtomicMeasure: mixed mark dimensions");
    }
    std::stable_sort(atoms_.begin(), atoms_.end(),
                     [](const Atom& a, const Atom& b) { return a.time < b.time; });
}

int AtomicMeasure::dim() const {
    return atoms_.empty() ? 0 : static_cast<int>(atoms_.front().mark.size());
}

std::size_t AtomicMeasure::upper_index(double t, StopMode mode) const {
    if (mode == StopMode::ClosedAtT) {
        auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                   [](double v, const Atom& a) { return v < a.time; });
        return static_cast<std::size_t>(it - atoms_.begin());
    }
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                               [](const Atom& a, double v) { return a.time < v; });
    return static_cast<std::size_t>(it - atoms_.begin());
}

long AtomicMeasure::count(double t0, bool include_t0, double t1, bool include_t1,
                          const MarkRegion& region) const {
    long n = 0;
    for (const auto& a : atoms_) {
        if (a.time > t1) break;
        const bool in_time = (a.time > t0 || (include_t0 && a.time == t0)) &&
                             (a.time < t1 || (include_t1 && a.time == t1));
        if (in_time && region.contains(a.mark)) ++n;
    }
    return n;
}

long AtomicMeasure::count_upto(double t, StopMode mode) const {
    return static_cast<long>(upper_index(t, mode));
}

AtomicMeasure restrict(const AtomicMeasure& j, double t, StopMode mode) {
    if (!(t >= 0.0) || t > j.horizon())
        throw std::domain_error("restrict: t outside [0, horizon]");
    const std::size_t n = j.upper_index(t, mode);
    std::vector<Atom> kept(j.atoms().begin(), j.atoms().begin() + n);
    return AtomicMeasure(j.horizon(), std::move(kept));
}

AtomicMeasure add_atom(const AtomicMeasure& j, double t, Mark z) {
    if (!(t >= 0.0) || t > j.horizon())
        throw std::domain_error("add_atom: t outside [0, horizon]");
    if (z.empty() || !(mark_norm(z) > 0.0))
        throw std::domain_error("add_atom: marks live in R^d without the origin");
    std::vector<Atom> atoms = j.atoms();
    // insert after any existing atoms at the same time (stable tie order)
    auto it = std::upper_bound(atoms.begin(), atoms.end(), t,
                               [](double v, const Atom& a) { return v < a.time; });
    atoms.insert(it, Atom{t, std::move(z)});
    return AtomicMeasure(j.horizon(), std::move(atoms));
}

long cylinder_count(const AtomicMeasure& j, double t, AnnulusSpec spec, CountWindow window) {
    if (!(spec.alpha >= 1.0)) throw std::domain_error("cylinder_count: alpha must be >= 1");
    if (!(t >= 0.0) || t > j.horizon())
        throw std::domain_error("cylinder_count: t outside [0, horizon]");
    const double lo = 1.0 / spec.alpha;
    const double hi = spec.alpha;
    long n = 0;
    for (const auto& a : j.atoms()) {
        if (a.time > t) break;
        if (window == CountWindow::InstantOnly && a.time != t) continue;
        const double r = mark_norm(a.mark);
        if (r > lo && r <= hi) ++n;
    }
    return n;
}

} // namespace jumprep
