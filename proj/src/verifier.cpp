#include "jumprep/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "jumprep/parallel.hpp"

namespace jumprep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// per-path residual r = Y(T) - Y(0) - diffusion leg - compensated jump leg;
// the diffusion leg runs over the x grid against the drift-removed
// increments, the jump legs over the refined (grid + atom) segmentation
double path_residual(const RepresentationCase& rc, const Scenario& sc, const CaseEvaluator& ev) {
    double diffusion = 0.0;
    if (ev.diffusion_integrand) {
        const auto& x = sc.x;
        for (std::size_t k = 0; k + 1 < x.node_count(); ++k) {
            const double t0 = x.node_time(k);
            const double t1 = x.node_time(k + 1);
            const double dm = (x.node_value(k + 1) - rc.levy.gamma * t1) -
                              (x.node_value(k) - rc.levy.gamma * t0);
            diffusion += ev.diffusion_integrand(t0) * dm;
        }
    }

    double jump = 0.0;
    if (ev.jump_integrand) {
        for (const auto& a : sc.j.atoms())
            if (a.time > 0.0 && a.time <= rc.horizon) jump += ev.jump_integrand(a.time, a.mark);

        // mu side: midpoint in explicit time over grid-and-atom segments
        std::vector<double> nodes(sc.x.times());
        for (const auto& a : sc.j.atoms()) nodes.push_back(a.time);
        nodes.push_back(rc.horizon);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

        const MarkRegion support = rc.levy.mark_law.support_region();
        double mu_part = 0.0;
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            const double lo = nodes[k], hi = nodes[k + 1];
            if (hi <= lo) continue;
            const double mid = 0.5 * (lo + hi);
            const double mark_int =
                ev.jump_mark_integral
                    ? ev.jump_mark_integral(mid)
                    : rc.levy.mark_law.integrate(
                          [&](const Mark& z) { return ev.jump_integrand(mid, z); }, support);
            mu_part += mark_int * (hi - lo);  // unit intensity by scenario construction
        }
        jump -= mu_part;
    }

    return ev.y_end - ev.y_start - diffusion - jump;
}

} // namespace

Scenario sample_model_scenario(const CompensatorModel& model, double T, int n_steps,
                               std::uint64_t master_seed, std::uint64_t path_index) {
    RngStream rng(master_seed, path_index);
    Scenario sc;
    std::vector<double> times(n_steps + 1), values(n_steps + 1, 0.0);
    for (int k = 0; k <= n_steps; ++k) times[k] = T * static_cast<double>(k) / n_steps;
    sc.x = CadlagPath(T, std::move(times), std::move(values));
    sc.model = model;
    sc.j = sample_prm(model, T, rng);
    sc.seed = path_index;
    return sc;
}

McReport isometry_check(const SimpleField& psi, const CompensatorModel& model, double T,
                        std::size_t n_paths, std::uint64_t seed, int n_steps) {
    const auto t0 = Clock::now();
    std::vector<double> lhs(n_paths), rhs(n_paths), diff(n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = sample_model_scenario(model, T, n_steps, seed, p);
        const double ip = psi.integral(sc.x, sc.j, T);
        const double qp = psi.mu_quadratic_mass(sc.x, sc.j, T);
        if (!std::isfinite(ip) || !std::isfinite(qp))
            throw std::runtime_error("isometry_check: non-finite path value");
        lhs[p] = ip * ip;
        rhs[p] = qp;
        diff[p] = lhs[p] - rhs[p];
    });
    const auto sl = sample_stats(lhs);
    const auto sr = sample_stats(rhs);
    const auto sd = sample_stats(diff);
    if (!std::isfinite(sd.mean) || (sd.n > 8 && sd.se > 1e6))
        throw std::runtime_error("isometry_check: divergent second moment");

    McReport rep;
    rep.label = "isometry";
    rep.estimate = sl.mean;
    rep.std_error = sd.se;
    rep.n_samples = n_paths;
    rep.target = sr.mean;
    rep.pass = std::abs(sd.mean) <= 3.0 * sd.se || sd.mean == 0.0;
    rep.runtime_s = seconds_since(t0);
    return rep;
}

ResidualReport mrt_residual(const RepresentationCase& rc, std::size_t n_paths, int n_steps,
                            std::uint64_t seed) {
    const auto t0 = Clock::now();
    std::vector<double> r2(n_paths), y2(n_paths);
    std::vector<unsigned char> bad(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = make_scenario(rc.levy, rc.horizon, n_steps, seed, p);
        const CaseEvaluator ev = rc.evaluator(sc);
        const double r = path_residual(rc, sc, ev);
        if (!std::isfinite(r) || !std::isfinite(ev.y_end)) {
            bad[p] = 1;
            r2[p] = 0.0;
            y2[p] = 0.0;
            return;
        }
        r2[p] = r * r;
        y2[p] = ev.y_end * ev.y_end;
    });

    long rejected = 0;
    for (auto b : bad) rejected += b;
    const auto sr2 = sample_stats(r2);
    const auto sy2 = sample_stats(y2);
    constexpr double floor = 1e-12;
    const double denom = std::max(sy2.mean, floor);
    const double rel = std::sqrt(std::max(0.0, sr2.mean) / denom);
    const double se_rel = rel > 0.0 ? sr2.se / (2.0 * std::sqrt(sr2.mean * denom)) : 0.0;
    const double allowance = kGridAllowanceCoeff / std::sqrt(static_cast<double>(n_steps));

    ResidualReport out;
    out.rel_residual = rel;
    out.se_rel = se_rel;
    out.grid_allowance = allowance;
    out.mean_y2 = sy2.mean;
    out.rejected_paths = rejected;
    out.summary.label = "mrt_residual:" + rc.label;
    out.summary.estimate = rel;
    out.summary.std_error = se_rel;
    out.summary.n_samples = n_paths;
    out.summary.target = 0.0;
    out.summary.pass = (rejected == 0) && (rel <= 3.0 * se_rel + allowance);
    out.summary.runtime_s = seconds_since(t0);
    return out;
}

McReport residual_innovation(const RepresentationCase& rc, const LevyParams& sample_params,
                             std::size_t n_paths, int n_steps, std::uint64_t seed) {
    const auto t0 = Clock::now();
    std::vector<double> r(n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = make_scenario(sample_params, rc.horizon, n_steps, seed, p);
        const CaseEvaluator ev = rc.evaluator(sc);
        r[p] = path_residual(rc, sc, ev);
        if (!std::isfinite(r[p])) throw std::runtime_error("residual_innovation: non-finite path");
    });
    const auto sr = sample_stats(r);
    McReport rep;
    rep.label = "innovation:" + rc.label;
    rep.estimate = sr.mean;
    rep.std_error = sr.se;
    rep.n_samples = n_paths;
    rep.target = 0.0;
    rep.pass = std::abs(sr.mean) <= 3.0 * sr.se || (sr.mean == 0.0 && sr.se == 0.0);
    rep.runtime_s = seconds_since(t0);
    return rep;
}

McReport adjoint_check(const RepresentationCase& rc, const SimpleField& psi, std::size_t n_paths,
                       int n_steps, std::uint64_t seed) {
    const auto t0 = Clock::now();
    std::vector<double> lhs(n_paths), rhs(n_paths), diff(n_paths);
    const MarkRegion cells = psi.cells_region();
    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = make_scenario(rc.levy, rc.horizon, n_steps, seed, p);
        const CaseEvaluator ev = rc.evaluator(sc);
        const double ipsi = psi.integral(sc.x, sc.j, rc.horizon);
        lhs[p] = ev.y_end * ipsi;

        // int nabla Y psi dmu over refined segments, midpoint in explicit time
        const auto bound = psi.bind(sc.x, sc.j);
        std::vector<double> nodes(sc.x.times());
        for (const auto& a : sc.j.atoms()) nodes.push_back(a.time);
        for (double tau : bound.tau)
            if (tau > 0.0 && tau < rc.horizon) nodes.push_back(tau);
        nodes.push_back(rc.horizon);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            const double lo = nodes[k], hi = nodes[k + 1];
            if (hi <= lo) continue;
            const double mid = 0.5 * (lo + hi);
            acc += rc.levy.mark_law.integrate(
                       [&](const Mark& z) {
                           return ev.jump_integrand(mid, z) * bound.evaluate(mid, z);
                       },
                       cells) *
                   (hi - lo);
        }
        rhs[p] = acc;
        diff[p] = lhs[p] - rhs[p];
        if (!std::isfinite(diff[p])) throw std::runtime_error("adjoint_check: non-finite path");
    });
    const auto sl = sample_stats(lhs);
    const auto sd = sample_stats(diff);
    const auto sr = sample_stats(rhs);
    McReport rep;
    rep.label = "adjoint:" + rc.label;
    rep.estimate = sl.mean;
    rep.std_error = sd.se;
    rep.n_samples = n_paths;
    rep.target = sr.mean;
    rep.pass = std::abs(sd.mean) <= 3.0 * sd.se || sd.mean == 0.0;
    rep.runtime_s = seconds_since(t0);
    return rep;
}

LevyParams tilted_params(const LevyParams& params, const TiltSpec& spec) {
    spec.validate();
    const CompensatorModel base{Intensity::constant(1.0), params.mark_law};
    const CompensatorModel tilted = tilt(base, spec);
    LevyParams out = params;
    // fold the constant intensity factor into the mark-law mass
    MarkLaw law = tilted.mark_law;
    const double f = tilted.intensity.rate;
    if (law.kind == MarkLaw::Kind::PointMasses) {
        for (auto& [z, w] : law.masses) w *= f;
        law = MarkLaw::point_masses(law.masses);
    } else {
        for (auto& d : law.density) d *= f;
        law = MarkLaw::density_table(law.edges, law.density);
    }
    out.mark_law = law;
    return out;
}

MeasureChangeReport measure_change_invariance(const RepresentationCase& rc, const TiltSpec& spec,
                                              std::size_t n_paths, int n_steps,
                                              std::uint64_t seed, std::size_t probe_scenarios,
                                              std::size_t probes_per_scenario, double probe_tol) {
    const LevyParams tilted = tilted_params(rc.levy, spec);

    // (a) pathwise: the jump integrand evaluated on tilted scenarios is the
    // same function as the vertical perturbation of the functional
    std::vector<double> gaps(probe_scenarios, 0.0);
    parallel_for(probe_scenarios, [&](std::size_t p) {
        const Scenario sc = make_scenario(tilted, rc.horizon, n_steps, seed ^ 0x5151u, p);
        const CaseEvaluator ev = rc.evaluator(sc);
        RngStream probe_rng(seed ^ 0xabcdu, p);
        double worst = 0.0;
        for (std::size_t q = 0; q < probes_per_scenario; ++q) {
            const double t = 0.05 + 0.9 * probe_rng.uniform() * rc.horizon;
            const Mark z = rc.levy.mark_law.sample(probe_rng);
            const double closed = ev.jump_integrand ? ev.jump_integrand(t, z) : 0.0;
            const double pathwise = vertical_jump_derivative(rc.functional, t, z, sc.x, sc.j);
            worst = std::max(worst, std::abs(closed - pathwise));
        }
        gaps[p] = worst;
    });
    MeasureChangeReport rep;
    rep.max_field_gap = *std::max_element(gaps.begin(), gaps.end());
    rep.pathwise_pass = rep.max_field_gap <= probe_tol;

    // (b) innovation under the tilted law, compensated with the original mu
    rep.innovation = residual_innovation(rc, tilted, n_paths, n_steps, seed ^ 0x77u);
    rep.pass = rep.pathwise_pass && rep.innovation.pass;
    return rep;
}

RegressionTable integrand_regression_oracle(const RepresentationCase& rc, int time_bins,
                                            const std::vector<MarkBand>& mark_bins,
                                            std::size_t n_paths, int n_steps,
                                            std::uint64_t seed) {
    if (time_bins < 1) throw std::domain_error("integrand_regression_oracle: need time bins");
    for (const auto& b : mark_bins)
        if (!(b.min_abs() > 0.0))
            throw std::domain_error("integrand_regression_oracle: bins must avoid 0");

    const std::size_t nb = static_cast<std::size_t>(time_bins) * mark_bins.size();
    // per path and bin: y_T * (J(B) - mu(B)), mu(B), int_B psi dmu, atom count
    std::vector<std::vector<double>> num(nb, std::vector<double>(n_paths));
    std::vector<std::vector<double>> mu_mass(nb, std::vector<double>(n_paths));
    std::vector<std::vector<double>> closed(nb, std::vector<double>(n_paths));
    std::vector<std::vector<double>> counts(nb, std::vector<double>(n_paths));

    const double dt_bin = rc.horizon / time_bins;
    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = make_scenario(rc.levy, rc.horizon, n_steps, seed, p);
        const CaseEvaluator ev = rc.evaluator(sc);
        for (int ti = 0; ti < time_bins; ++ti) {
            const double lo = ti * dt_bin, hi = (ti + 1) * dt_bin;
            for (std::size_t mi = 0; mi < mark_bins.size(); ++mi) {
                const std::size_t b = static_cast<std::size_t>(ti) * mark_bins.size() + mi;
                const MarkRegion region(mark_bins[mi]);
                const double cnt =
                    static_cast<double>(sc.j.count(lo, false, hi, true, region));
                const double mass = sc.model.mass(lo, hi, region, sc.j);
                num[b][p] = ev.y_end * (cnt - mass);
                mu_mass[b][p] = mass;
                counts[b][p] = cnt;

                // int_B psi dmu over refined sub-segments of the bin
                std::vector<double> nodes{lo, hi};
                for (const auto& a : sc.j.atoms())
                    if (a.time > lo && a.time < hi) nodes.push_back(a.time);
                std::sort(nodes.begin(), nodes.end());
                double acc = 0.0;
                for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                    const double mid = 0.5 * (nodes[k] + nodes[k + 1]);
                    acc += rc.levy.mark_law.integrate(
                               [&](const Mark& z) { return ev.jump_integrand(mid, z); }, region) *
                           (nodes[k + 1] - nodes[k]);
                }
                closed[b][p] = acc;
            }
        }
    });

    RegressionTable table;
    table.pass = true;
    for (int ti = 0; ti < time_bins; ++ti)
        for (std::size_t mi = 0; mi < mark_bins.size(); ++mi) {
            const std::size_t b = static_cast<std::size_t>(ti) * mark_bins.size() + mi;
            RegressionBin bin;
            bin.t0 = ti * dt_bin;
            bin.t1 = (ti + 1) * dt_bin;
            bin.band = mark_bins[mi];
            const auto sm = sample_stats(mu_mass[b]);
            const auto sc_ = sample_stats(counts[b]);
            bin.atom_count = static_cast<long>(sc_.mean * static_cast<double>(n_paths) + 0.5);
            if (sm.mean <= 0.0 || bin.atom_count == 0) {
                bin.empty = true;
                bin.pass = true;  // flagged, excluded from the comparison
                table.bins.push_back(bin);
                continue;
            }
            const auto sn = sample_stats(num[b]);
            const auto scl = sample_stats(closed[b]);
            bin.estimate = sn.mean / sm.mean;
            bin.se = sn.se / sm.mean;
            bin.closed_avg = scl.mean / sm.mean;
            // paired difference test: E[y (J - mu)(B)] = E[int_B psi dmu]
            std::vector<double> diff(n_paths);
            for (std::size_t p = 0; p < n_paths; ++p) diff[p] = num[b][p] - closed[b][p];
            const auto sd = sample_stats(diff);
            bin.pass = std::abs(sd.mean) <= 3.0 * sd.se || sd.mean == 0.0;
            table.pass = table.pass && bin.pass;
            table.bins.push_back(bin);
        }
    return table;
}

} // namespace jumprep
