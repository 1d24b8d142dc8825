#include "jumprep/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "jumprep/quadrature.hpp"

namespace jumprep {

namespace {

double definition_jump_derivative(const Functional& F, double t, const Mark& z,
                                  const CadlagPath& x, const AtomicMeasure& j) {
    const AtomicMeasure prior = restrict(j, t, StopMode::OpenAtT);
    const AtomicMeasure bumped = add_atom(prior, t, z);
    return F.evaluate(t, x, bumped) - F.evaluate(t, x, prior);
}

} // namespace

double vertical_jump_derivative(const Functional& F, double t, const Mark& z, const CadlagPath& x,
                                const AtomicMeasure& j, bool cross_check, double cross_tol) {
    if (z.empty() || !(mark_norm(z) > 0.0))
        throw std::domain_error("vertical_jump_derivative: mark must be nonzero");
    if (!(t >= 0.0) || t > j.horizon())
        throw std::domain_error("vertical_jump_derivative: t outside [0, horizon]");
    if (F.closed_jump_derivative) {
        const double closed = F.closed_jump_derivative(t, z, x, j);
        if (cross_check) {
            const double def = definition_jump_derivative(F, t, z, x, j);
            if (std::abs(def - closed) > cross_tol)
                throw std::runtime_error(
                    "vertical_jump_derivative: closed form disagrees with definition by " +
                    std::to_string(std::abs(def - closed)));
        }
        return closed;
    }
    return definition_jump_derivative(F, t, z, x, j);
}

std::pair<std::vector<double>, FdDiagnostics> vertical_diffusion_derivative(
    const Functional& F, double t, const CadlagPath& x, const AtomicMeasure& j,
    const StepSchedule& sched) {
    if (!(sched.h0 > 0.0) || !(sched.shrink > 0.0) || !(sched.shrink < 1.0) || sched.levels < 1)
        throw std::domain_error("vertical_diffusion_derivative: bad step schedule");
    const int d = x.dim();
    const CadlagPath stopped = x.stopped(t);
    const AtomicMeasure jt = restrict(j, t, StopMode::ClosedAtT);
    const double base = F.evaluate(t, stopped, jt);
    if (!std::isfinite(base))
        throw std::runtime_error("vertical_diffusion_derivative: non-finite base value");

    FdDiagnostics diag;
    diag.levels.resize(d);
    diag.extrapolated.resize(d);
    std::vector<double> value(d);

    for (int i = 0; i < d; ++i) {
        std::vector<double> quot(sched.levels);
        double h = sched.h0;
        for (int l = 0; l < sched.levels; ++l) {
            const double bumped = F.evaluate(t, x.bumped(t, h, i), jt);
            if (!std::isfinite(bumped))
                throw std::runtime_error("vertical_diffusion_derivative: non-finite value at h = " +
                                         std::to_string(h));
            quot[l] = (bumped - base) / h;
            diag.levels[i].push_back({h, quot[l]});
            h *= sched.shrink;
        }
        // Richardson on the one-sided ladder h_l = h0 * rho^l: successive
        // columns cancel the O(h^m) terms.
        std::vector<double> column = quot;
        double rho_m = sched.shrink;
        for (int m = 1; m < sched.levels; ++m) {
            for (int l = 0; l + m < sched.levels; ++l)
                column[l] = (column[l + 1] - rho_m * column[l]) / (1.0 - rho_m);
            rho_m *= sched.shrink;
        }
        value[i] = column[0];
        diag.extrapolated[i] = column[0];
    }
    return {value, diag};
}

PredictableField nabla_p(const Functional& F) {
    PredictableField field;
    field.unrestricted_support = true;
    field.support = MarkRegion::everything();
    field.evaluate = [F](double t, const Mark& z, const CadlagPath& x, const AtomicMeasure& j) {
        return vertical_jump_derivative(F, t, z, x, j);
    };
    return field;
}

double mu_integral(const PredictableField& psi, const CompensatorModel& model, const CadlagPath& x,
                   const AtomicMeasure& j, double t0, double t1, const QuadOpts& opts) {
    if (psi.unrestricted_support)
        throw std::domain_error("mu_integral: field support must be bounded away from 0");
    require_away_from_zero(psi.support, "mu_integral");
    const double lo = std::max(t0, psi.t_begin);
    const double hi = std::min(t1, psi.t_end);
    if (hi <= lo) return 0.0;

    // factorized field: split the mark integral out of the time integral
    if (psi.time_component && psi.mark_component) {
        const double mark_part = model.mark_law.integrate(psi.mark_component, psi.support);
        if (mark_part == 0.0) return 0.0;
        return mark_part *
               model.time_integral([&](double s) { return psi.time_component(s, x, j); }, lo, hi, j,
                                   opts.rel_tol);
    }

    return model.time_integral(
        [&](double s) {
            return model.mark_law.integrate(
                [&](const Mark& z) { return psi.evaluate(s, z, x, j); }, psi.support);
        },
        lo, hi, j, opts.rel_tol);
}

double compensated_integral(const PredictableField& psi, const CompensatorModel& model,
                            const CadlagPath& x, const AtomicMeasure& j, double t,
                            const QuadOpts& opts) {
    if (psi.unrestricted_support)
        throw std::domain_error("compensated_integral: field support must be bounded away from 0");
    require_away_from_zero(psi.support, "compensated_integral");
    if (!(t >= 0.0) || t > j.horizon())
        throw std::domain_error("compensated_integral: t outside [0, horizon]");

    double atom_sum = 0.0;
    for (const auto& a : j.atoms()) {
        if (a.time > t) break;
        if (!psi.in_window(a.time)) continue;
        if (!psi.support.contains(a.mark)) continue;
        atom_sum += psi.evaluate(a.time, a.mark, x, j);
    }
    return atom_sum - mu_integral(psi, model, x, j, 0.0, t, opts);
}

} // namespace jumprep
