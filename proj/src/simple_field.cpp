#include "jumprep/simple_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumprep {

// ---------------------------------------------------------------------------
// statistics and coefficients
// ---------------------------------------------------------------------------

double StatSpec::eval(const CadlagPath& x, const AtomicMeasure& j) const {
    switch (kind) {
        case Kind::PathValue: {
            const double t = std::min(time, x.horizon());
            return x.value(t, coord);
        }
        case Kind::CylinderCount: {
            const double t = std::min(time, j.horizon());
            return static_cast<double>(cylinder_count(j, t, AnnulusSpec{alpha}));
        }
    }
    return 0.0;
}

double CoefficientSpec::eval(const CadlagPath& x_stopped, const AtomicMeasure& j_stopped) const {
    double v = c0;
    for (const auto& term : terms) v += term.weight * std::tanh(term.stat.eval(x_stopped, j_stopped));
    return v;
}

// ---------------------------------------------------------------------------
// stopping specs
// ---------------------------------------------------------------------------

StoppingSpec StoppingSpec::fixed(double t) {
    if (!(t >= 0.0)) throw std::domain_error("StoppingSpec: fixed time must be >= 0");
    StoppingSpec s;
    s.kind = Kind::Fixed;
    s.time = t;
    return s;
}

StoppingSpec StoppingSpec::mass_hit(MarkRegion region, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("StoppingSpec: eps must be > 0");
    require_away_from_zero(region, "StoppingSpec");
    StoppingSpec s;
    s.kind = Kind::MassHit;
    s.region = std::move(region);
    s.eps = eps;
    return s;
}

double StoppingSpec::eval(const CompensatorModel& model, const AtomicMeasure& j) const {
    if (kind == Kind::Fixed) return std::min(time, j.horizon());
    return hitting_time(model, j, region, eps).time;
}

// ---------------------------------------------------------------------------
// cell geometry
// ---------------------------------------------------------------------------

namespace {

bool ranges_overlap(double a0, double a1, double b0, double b1) {
    return std::min(a1, b1) > std::max(a0, b0);
}

bool bands_disjoint(const MarkBand& a, const MarkBand& b) {
    // compare on the signed line (d = 1) or on norm ranges
    auto pieces = [](const MarkBand& m) {
        std::vector<std::pair<double, double>> out;
        if (m.kind == MarkBand::Kind::Interval)
            out.emplace_back(m.lo, m.hi);
        else {
            out.emplace_back(m.lo, m.hi);
            out.emplace_back(-m.hi, -m.lo);
        }
        return out;
    };
    if (a.kind == MarkBand::Kind::Annulus && b.kind == MarkBand::Kind::Annulus)
        return !ranges_overlap(a.lo, a.hi, b.lo, b.hi);
    for (const auto& [a0, a1] : pieces(a))
        for (const auto& [b0, b1] : pieces(b))
            if (ranges_overlap(a0, a1, b0, b1)) return false;
    return true;
}

std::size_t cell_of(const std::vector<MarkBand>& cells, const Mark& z) {
    for (std::size_t k = 0; k < cells.size(); ++k)
        if (cells[k].contains(z)) return k;
    return cells.size();
}

// interval index i with tau[i] < t <= tau[i+1]; npos when outside the grid
std::size_t interval_of(const std::vector<double>& tau, double t) {
    for (std::size_t i = 0; i + 1 < tau.size(); ++i)
        if (t > tau[i] && t <= tau[i + 1]) return i;
    return tau.size();
}

} // namespace

// ---------------------------------------------------------------------------
// SimpleField
// ---------------------------------------------------------------------------

SimpleField::SimpleField(std::vector<StoppingSpec> taus, std::vector<MarkBand> cells,
                         std::vector<std::vector<CoefficientSpec>> coeffs, CompensatorModel model)
    : taus_(std::move(taus)), cells_(std::move(cells)), coeffs_(std::move(coeffs)),
      model_(std::move(model)) {
    if (cells_.empty()) throw std::domain_error("SimpleField: need at least one mark cell");
    for (const auto& c : cells_)
        if (!(c.min_abs() > 0.0))
            throw std::domain_error("SimpleField: cells must be bounded away from 0");
    for (std::size_t a = 0; a < cells_.size(); ++a)
        for (std::size_t b = a + 1; b < cells_.size(); ++b)
            if (!bands_disjoint(cells_[a], cells_[b]))
                throw std::domain_error("SimpleField: mark cells must be disjoint");
    if (coeffs_.size() != taus_.size() + 1)
        throw std::domain_error("SimpleField: need one coefficient row per grid interval");
    for (const auto& row : coeffs_)
        if (row.size() != cells_.size())
            throw std::domain_error("SimpleField: coefficient row size must match cells");
    // fixed times must already be sorted; hitting times are clamped per path
    double prev = 0.0;
    for (const auto& s : taus_) {
        if (s.kind == StoppingSpec::Kind::Fixed) {
            if (s.time < prev) throw std::domain_error("SimpleField: grid not sorted");
            prev = s.time;
        }
    }
}

SimpleField::Bound SimpleField::bind(const CadlagPath& x, const AtomicMeasure& j) const {
    Bound b;
    b.parent = this;
    b.tau.reserve(taus_.size() + 2);
    b.tau.push_back(0.0);
    for (const auto& s : taus_) b.tau.push_back(std::max(b.tau.back(), s.eval(model_, j)));
    b.tau.push_back(std::max(b.tau.back(), j.horizon()));

    b.value.resize(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const CadlagPath xs = x.stopped(std::min(b.tau[i], x.horizon()));
        const AtomicMeasure js = restrict(j, b.tau[i], StopMode::ClosedAtT);
        b.value[i].resize(cells_.size());
        for (std::size_t k = 0; k < cells_.size(); ++k)
            b.value[i][k] = coeffs_[i][k].eval(xs, js);
    }
    return b;
}

double SimpleField::Bound::evaluate(double t, const Mark& z) const {
    const std::size_t k = cell_of(parent->cells_, z);
    if (k == parent->cells_.size()) return 0.0;
    const std::size_t i = interval_of(tau, t);
    if (i == tau.size()) return 0.0;
    return value[i][k];
}

double SimpleField::evaluate(double t, const Mark& z, const CadlagPath& x,
                             const AtomicMeasure& j) const {
    return bind(x, j).evaluate(t, z);
}

MarkRegion SimpleField::cells_region() const { return MarkRegion(cells_); }

PredictableField SimpleField::as_field() const {
    PredictableField f;
    f.support = cells_region();
    f.t_begin = 0.0;
    f.t_end = std::numeric_limits<double>::infinity();
    SimpleField copy = *this;
    f.evaluate = [copy](double t, const Mark& z, const CadlagPath& x, const AtomicMeasure& j) {
        return copy.evaluate(t, z, x, j);
    };
    return f;
}

double SimpleField::integral(const CadlagPath& x, const AtomicMeasure& j, double t) const {
    const Bound b = bind(x, j);
    double atom_sum = 0.0;
    for (const auto& a : j.atoms()) {
        if (a.time > t) break;
        atom_sum += b.evaluate(a.time, a.mark);
    }
    double mass_sum = 0.0;
    for (std::size_t i = 0; i + 1 < b.tau.size(); ++i) {
        const double lo = std::min(b.tau[i], t);
        const double hi = std::min(b.tau[i + 1], t);
        if (hi <= lo) continue;
        for (std::size_t k = 0; k < cells_.size(); ++k)
            mass_sum += b.value[i][k] * model_.mass(lo, hi, MarkRegion(cells_[k]), j);
    }
    return atom_sum - mass_sum;
}

double SimpleField::mu_quadratic_mass(const CadlagPath& x, const AtomicMeasure& j,
                                      double t) const {
    const Bound b = bind(x, j);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < b.tau.size(); ++i) {
        const double lo = std::min(b.tau[i], t);
        const double hi = std::min(b.tau[i + 1], t);
        if (hi <= lo) continue;
        for (std::size_t k = 0; k < cells_.size(); ++k)
            acc += b.value[i][k] * b.value[i][k] * model_.mass(lo, hi, MarkRegion(cells_[k]), j);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// SimpleProcess
// ---------------------------------------------------------------------------

SimpleProcess::SimpleProcess(std::vector<StoppingSpec> taus, std::vector<CoefficientSpec> coeffs,
                             CompensatorModel model)
    : taus_(std::move(taus)), coeffs_(std::move(coeffs)), model_(std::move(model)) {
    if (coeffs_.size() != taus_.size() + 1)
        throw std::domain_error("SimpleProcess: need one coefficient per grid interval");
    double prev = 0.0;
    for (const auto& s : taus_) {
        if (s.kind == StoppingSpec::Kind::Fixed) {
            if (s.time < prev) throw std::domain_error("SimpleProcess: grid not sorted");
            prev = s.time;
        }
    }
}

double SimpleProcess::evaluate(double t, const CadlagPath& x, const AtomicMeasure& j) const {
    std::vector<double> tau{0.0};
    for (const auto& s : taus_) tau.push_back(std::max(tau.back(), s.eval(model_, j)));
    tau.push_back(std::max(tau.back(), j.horizon()));
    const std::size_t i = interval_of(tau, t);
    if (i == tau.size()) return 0.0;
    const CadlagPath xs = x.stopped(std::min(tau[i], x.horizon()));
    const AtomicMeasure js = restrict(j, tau[i], StopMode::ClosedAtT);
    return coeffs_[i].eval(xs, js);
}

double SimpleProcess::integral(const CadlagPath& x, const AtomicMeasure& j, double t,
                               int coord) const {
    std::vector<double> tau{0.0};
    for (const auto& s : taus_) tau.push_back(std::max(tau.back(), s.eval(model_, j)));
    tau.push_back(std::max(tau.back(), j.horizon()));
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
        const double lo = std::min(tau[i], t);
        const double hi = std::min(tau[i + 1], t);
        if (hi <= lo) continue;  // degenerate cells contribute zero
        const CadlagPath xs = x.stopped(std::min(tau[i], x.horizon()));
        const AtomicMeasure js = restrict(j, tau[i], StopMode::ClosedAtT);
        acc += coeffs_[i].eval(xs, js) * (x.value(hi, coord) - x.value(lo, coord));
    }
    return acc;
}

double diffusion_integral(const SimpleProcess& phi, const CadlagPath& x, const AtomicMeasure& j,
                          double t, int coord) {
    return phi.integral(x, j, t, coord);
}

} // namespace jumprep
