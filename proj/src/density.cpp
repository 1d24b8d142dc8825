#include "jumprep/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jumprep/parallel.hpp"
#include "jumprep/stats.hpp"
#include "jumprep/verifier.hpp"

namespace jumprep {

RandomPartition random_partition(const CompensatorModel& model, const AtomicMeasure& j,
                                 const MarkRegion& K, int n) {
    if (n < 1) throw std::domain_error("random_partition: level must be >= 1");
    require_away_from_zero(K, "random_partition");
    const double T = j.horizon();
    const double step = std::pow(2.0, -n);
    const double cap_mass = std::pow(2.0, n);
    const double total = model.mass(0.0, T, K, j);
    const double cap_time = total >= cap_mass ? hitting_time(model, j, K, cap_mass).time : T;

    // hard index bound 2^(2^n) applies only for small n; the mass cap pins
    // the grid long before it for n >= 3
    const double hard_bound = n <= 5 ? std::pow(2.0, std::pow(2.0, n)) : 1e18;

    RandomPartition part;
    part.level = n;
    part.region = K;
    part.times.push_back(0.0);
    for (double i = 1.0; i <= hard_bound; i += 1.0) {
        const double target = i * step;
        double t;
        bool pinned = false;
        if (target >= cap_mass || total < target) {
            t = cap_time;
            pinned = true;
        } else {
            t = std::min(hitting_time(model, j, K, target).time, cap_time);
        }
        t = std::min(t, T);
        t = std::max(t, part.times.back());
        part.times.push_back(t);
        if (pinned || t >= cap_time || t >= T) {
            part.saturated = true;
            break;
        }
    }
    return part;
}

double GridField::evaluate(double t, const Mark& z) const {
    for (const auto& cell : cells) {
        if (!cell.band.contains(z)) continue;
        const auto& ts = cell.part.times;
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            if (t > ts[i] && t <= ts[i + 1]) return cell.value[i];
        return 0.0;
    }
    return 0.0;
}

double GridField::sup_abs() const {
    double m = 0.0;
    for (const auto& cell : cells)
        for (double v : cell.value) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// mu-average of f over (t0, t1] x band, recording the largest |f| sampled;
// 0/0 = 0 by convention
double cell_average(const RandomField& f, const MarkBand& band, double t0, double t1,
                    const CompensatorModel& model, const Scenario& sc, double& observed_sup) {
    if (t1 <= t0) return 0.0;
    const MarkRegion region(band);
    const double mass = model.mass(t0, t1, region, sc.j);
    if (mass <= 0.0) return 0.0;
    auto probe = [&](double s, const Mark& z) {
        const double v = f.evaluate(s, z, sc);
        observed_sup = std::max(observed_sup, std::abs(v));
        return v;
    };
    const double integral = model.time_integral(
        [&](double s) {
            return model.mark_law.integrate([&](const Mark& z) { return probe(s, z); }, region);
        },
        t0, t1, sc.j, 1e-10);
    return integral / mass;
}

GridField apply_averaging(const RandomField& f, const std::vector<MarkBand>& cells, int n,
                          const CompensatorModel& model, const Scenario& sc, bool lagged) {
    GridField out;
    for (const auto& band : cells) {
        GridField::Cell cell;
        cell.band = band;
        cell.part = random_partition(model, sc.j, MarkRegion(band), n);
        const std::size_t intervals = cell.part.times.size() - 1;
        cell.value.assign(intervals, 0.0);
        for (std::size_t i = 0; i < intervals; ++i) {
            const std::size_t src = lagged ? i : i + 1;  // averaging window (t_{src-1}, t_src]
            if (lagged && i == 0) continue;              // no prior cell: value 0
            const double a0 = cell.part.times[src - 1];
            const double a1 = cell.part.times[src];
            cell.value[i] = cell_average(f, band, a0, a1, model, sc, out.observed_f_sup);
        }
        out.cells.push_back(std::move(cell));
    }
    return out;
}

} // namespace

GridField apply_A(const RandomField& f, const std::vector<MarkBand>& cells, int n,
                  const CompensatorModel& model, const Scenario& sc) {
    return apply_averaging(f, cells, n, model, sc, /*lagged=*/true);
}

GridField apply_B(const RandomField& f, const std::vector<MarkBand>& cells, int l,
                  const CompensatorModel& model, const Scenario& sc) {
    return apply_averaging(f, cells, l, model, sc, /*lagged=*/false);
}

double l2_mu_error(const GridField& g, const RandomField& f, const std::vector<MarkBand>& cells,
                   const CompensatorModel& model, const Scenario& sc) {
    double acc = 0.0;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const MarkBand& band = cells[ci];
        const MarkRegion region(band);
        // segment at the partition times of the matching grid cell
        std::vector<double> nodes{0.0, sc.j.horizon()};
        if (ci < g.cells.size())
            nodes.insert(nodes.end(), g.cells[ci].part.times.begin(),
                         g.cells[ci].part.times.end());
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            const double lo = nodes[k], hi = nodes[k + 1];
            if (hi <= lo) continue;
            acc += model.time_integral(
                [&](double s) {
                    return model.mark_law.integrate(
                        [&](const Mark& z) {
                            const double d = g.evaluate(s, z) - f.evaluate(s, z, sc);
                            return d * d;
                        },
                        region);
                },
                lo, hi, sc.j, 1e-9);
        }
    }
    return acc;
}

double l2_mu_norm2(const RandomField& f, const std::vector<MarkBand>& cells,
                   const CompensatorModel& model, const Scenario& sc) {
    double acc = 0.0;
    for (const auto& band : cells) {
        const MarkRegion region(band);
        acc += model.time_integral(
            [&](double s) {
                return model.mark_law.integrate(
                    [&](const Mark& z) {
                        const double v = f.evaluate(s, z, sc);
                        return v * v;
                    },
                    region);
            },
            0.0, sc.j.horizon(), sc.j, 1e-9);
    }
    return acc;
}

FieldNormReport convergence_sweep(const RandomField& f, const std::vector<MarkBand>& cells,
                                  const std::vector<int>& levels, const CompensatorModel& model,
                                  double T, int n_steps, std::size_t n_paths, std::uint64_t seed,
                                  double clip) {
    RandomField g = f;
    if (clip > 0.0) {
        auto base = f.evaluate;
        g.evaluate = [base, clip](double t, const Mark& z, const Scenario& sc) {
            const double v = base(t, z, sc);
            return std::abs(v) <= clip ? v : 0.0;
        };
        g.bound = clip;
    }

    FieldNormReport report;
    report.levels = levels;
    std::vector<std::vector<double>> err(levels.size(), std::vector<double>(n_paths));
    std::vector<std::vector<double>> an2(levels.size(), std::vector<double>(n_paths));
    std::vector<double> fn2(n_paths);
    std::vector<double> sup_a(n_paths, 0.0);
    std::vector<unsigned char> contraction_ok(n_paths, 1);

    parallel_for(n_paths, [&](std::size_t p) {
        const Scenario sc = sample_model_scenario(model, T, n_steps, seed, p);
        fn2[p] = l2_mu_norm2(g, cells, model, sc);
        for (std::size_t li = 0; li < levels.size(); ++li) {
            const GridField a = apply_A(g, cells, levels[li], model, sc);
            err[li][p] = l2_mu_error(a, g, cells, model, sc);
            // ||A f||^2 = ||(A f - f) + f||^2 is cheaper through the same quadrature
            RandomField zero;
            zero.evaluate = [](double, const Mark&, const Scenario&) { return 0.0; };
            an2[li][p] = l2_mu_error(a, zero, cells, model, sc);
            sup_a[p] = std::max(sup_a[p], a.sup_abs());
            if (a.sup_abs() > a.observed_f_sup + 1e-12) contraction_ok[p] = 0;
        }
    });

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const auto se = sample_stats(err[li]);
        const auto sa = sample_stats(an2[li]);
        report.l2_error.push_back(se.mean);
        report.l2_error_se.push_back(se.se);
        report.a_norm2.push_back(sa.mean);
        report.f_norm2.push_back(sample_stats(fn2).mean);
    }
    for (double s : sup_a) report.sup_norm = std::max(report.sup_norm, s);
    for (auto ok : contraction_ok) report.sup_contraction_ok = report.sup_contraction_ok && ok;
    report.strictly_decreasing = true;
    for (std::size_t li = 0; li + 1 < report.l2_error.size(); ++li) {
        if (report.l2_error[li + 1] < report.l2_error[li])
            ++report.monotone_decreases;
        else
            report.strictly_decreasing = false;
    }
    return report;
}

} // namespace jumprep
