#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jumprep/atoms.hpp"
#include "jumprep/cadlag_path.hpp"
#include "jumprep/compensator.hpp"
#include "jumprep/mark_region.hpp"

namespace jumprep {

// Non-anticipative functional F(t, x, j) = F(t, x_t, j_t). Closed-form
// derivative fields are optional; the numeric routes below are always
// available as a cross-check.
struct Functional {
    std::function<double(double, const CadlagPath&, const AtomicMeasure&)> evaluate;

    // F(t, x, j_{t-} + delta_{(t,z)}) - F(t, x, j_{t-}), when known in closed form
    std::function<double(double, const Mark&, const CadlagPath&, const AtomicMeasure&)>
        closed_jump_derivative;

    // vertical path derivative, one entry per path coordinate
    std::function<std::vector<double>(double, const CadlagPath&, const AtomicMeasure&)>
        closed_diffusion_derivative;
};

// Predictable functional field psi(t, z, x, j) = psi(t, z, x_{t-}, j_{t-}).
// An optional time/mark factorization lets integrators split the mark
// integral from the time integral.
struct PredictableField {
    std::function<double(double, const Mark&, const CadlagPath&, const AtomicMeasure&)> evaluate;

    MarkRegion support;           // compact, away from 0 (unless unrestricted)
    double t_begin = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
    bool unrestricted_support = false;  // fields produced by nabla_p

    // optional factorization evaluate = time_component * mark_component
    std::function<double(double, const CadlagPath&, const AtomicMeasure&)> time_component;
    std::function<double(const Mark&)> mark_component;

    bool in_window(double t) const { return t > t_begin && t <= t_end; }
};

// Step schedule for one-sided difference quotients.
struct StepSchedule {
    double h0 = 1e-3;
    double shrink = 0.5;
    int levels = 6;
};

// Per-level record of the difference-quotient ladder.
struct FdLevel {
    double h = 0.0;
    double quotient = 0.0;
};

struct FdDiagnostics {
    std::vector<std::vector<FdLevel>> levels;  // one ladder per coordinate
    std::vector<double> extrapolated;
};

// F(t, x, j_{t-} + delta_{(t,z)}) - F(t, x, j_{t-}), computed from the
// definition via restrict + add_atom. When the functional carries a closed
// form it is used instead; cross_check re-derives the definition value and
// requires agreement within cross_tol.
double vertical_jump_derivative(const Functional& F, double t, const Mark& z, const CadlagPath& x,
                                const AtomicMeasure& j, bool cross_check = false,
                                double cross_tol = 1e-9);

// One-sided difference quotients along each path coordinate on the shrinking
// step ladder, Richardson-extrapolated; returns the value and the full table.
std::pair<std::vector<double>, FdDiagnostics> vertical_diffusion_derivative(
    const Functional& F, double t, const CadlagPath& x, const AtomicMeasure& j,
    const StepSchedule& sched = {});

// Predictable field (t, z) -> vertical jump derivative on the strictly-prior
// restriction of the inputs.
PredictableField nabla_p(const Functional& F);

// Quadrature control for the mu-side of compensated integrals.
struct QuadOpts {
    double rel_tol = 1e-8;
};

// sum of psi over atoms in the support minus the mu-integral of psi over
// (0, t] x support. psi must have support bounded away from 0.
double compensated_integral(const PredictableField& psi, const CompensatorModel& model,
                            const CadlagPath& x, const AtomicMeasure& j, double t,
                            const QuadOpts& opts = {});

// mu-integral alone: integral of psi over (t0, t1] x support against
// lambda(s) ds x nu(dz).
double mu_integral(const PredictableField& psi, const CompensatorModel& model,
                   const CadlagPath& x, const AtomicMeasure& j, double t0, double t1,
                   const QuadOpts& opts = {});

} // namespace jumprep
