#pragma once

// Shared generators and brute-force oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "jumprep/atoms.hpp"
#include "jumprep/cadlag_path.hpp"
#include "jumprep/compensator.hpp"
#include "jumprep/rng.hpp"
#include "jumprep/simple_field.hpp"

namespace testutil {

using namespace jumprep;

inline AtomicMeasure random_measure_in(RngStream& rng, double T, int max_atoms,
                                       const MarkLaw& law) {
    const int n = static_cast<int>(rng.uniform() * (max_atoms + 1));
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back(Atom{rng.uniform() * T, law.sample(rng)});
    return AtomicMeasure(T, std::move(atoms));
}

inline CadlagPath random_step_path(RngStream& rng, double T, int max_nodes) {
    const int n = 1 + static_cast<int>(rng.uniform() * max_nodes);
    std::vector<double> times{0.0}, values{2.0 * rng.uniform() - 1.0};
    for (int k = 1; k < n; ++k) {
        const double t = rng.uniform() * T;
        if (t > times.back())
            times.push_back(t);
        else
            continue;
        values.push_back(values.back() + rng.normal() * 0.5);
    }
    return CadlagPath(T, std::move(times), std::move(values));
}

inline MarkLaw random_mark_law(RngStream& rng) {
    if (rng.uniform() < 0.5) {
        std::vector<std::pair<Mark, double>> masses;
        const int n = 1 + static_cast<int>(rng.uniform() * 3);
        for (int i = 0; i < n; ++i) {
            const double z = (rng.uniform() < 0.4 ? -1.0 : 1.0) * (0.2 + 2.0 * rng.uniform());
            masses.push_back({scalar_mark(z), 0.2 + rng.uniform()});
        }
        return MarkLaw::point_masses(std::move(masses));
    }
    const double lo = 0.1 + 0.5 * rng.uniform();
    const double mid = lo + 0.2 + rng.uniform();
    const double hi = mid + 0.2 + rng.uniform();
    return MarkLaw::density_table({lo, mid, hi}, {0.2 + rng.uniform(), 0.2 + rng.uniform()});
}

inline Intensity random_intensity(RngStream& rng) {
    const double u = rng.uniform();
    if (u < 0.4) return Intensity::constant(0.5 + 2.0 * rng.uniform());
    if (u < 0.7)
        return Intensity::deterministic({0.0, 0.3 + 0.3 * rng.uniform(), 1.0},
                                        {0.3 + rng.uniform(), 0.3 + 2.0 * rng.uniform(),
                                         0.3 + rng.uniform()});
    return Intensity::path_dependent(0.4 + rng.uniform(), rng.uniform());
}

inline CompensatorModel random_model(RngStream& rng) {
    return CompensatorModel{random_intensity(rng), random_mark_law(rng)};
}

// split the law's support bands into 1..3 disjoint cells each
inline std::vector<MarkBand> partition_support(const MarkLaw& law, RngStream& rng) {
    std::vector<MarkBand> cells;
    for (const auto& band : law.support_region().bands) {
        const int pieces = 1 + static_cast<int>(rng.uniform() * 3.0);
        double lo = band.lo;
        for (int p = 0; p < pieces; ++p) {
            const double hi =
                (p + 1 == pieces) ? band.hi : lo + (band.hi - lo) * (0.3 + 0.4 * rng.uniform());
            if (hi <= lo) continue;
            cells.push_back(band.kind == MarkBand::Kind::Interval ? MarkBand::interval(lo, hi)
                                                                  : MarkBand::annulus(lo, hi));
            lo = hi;
        }
    }
    return cells;
}

inline CoefficientSpec random_coefficient(RngStream& rng, double T) {
    CoefficientSpec c;
    c.c0 = 2.0 * rng.uniform() - 1.0;
    const int terms = static_cast<int>(rng.uniform() * 3.0);
    for (int r = 0; r < terms; ++r) {
        StatSpec s;
        if (rng.uniform() < 0.5) {
            s.kind = StatSpec::Kind::PathValue;
            s.time = rng.uniform() * T;
        } else {
            s.kind = StatSpec::Kind::CylinderCount;
            s.time = rng.uniform() * T;
            s.alpha = 1.0 + 3.0 * rng.uniform();
        }
        c.terms.push_back({s, 2.0 * rng.uniform() - 1.0});
    }
    return c;
}

inline SimpleField random_simple_field(RngStream& rng, const CompensatorModel& model, double T) {
    std::vector<StoppingSpec> taus;
    const int grid_n = 1 + static_cast<int>(rng.uniform() * 3.0);
    std::vector<double> fixed;
    for (int i = 0; i < grid_n; ++i) fixed.push_back(rng.uniform() * T);
    std::sort(fixed.begin(), fixed.end());
    const bool use_hits = rng.uniform() < 0.4;
    double eps_acc = 0.0;
    for (double ft : fixed) {
        if (use_hits) {
            eps_acc += 0.1 + rng.uniform();
            taus.push_back(StoppingSpec::mass_hit(model.mark_law.support_region(), eps_acc));
        } else {
            taus.push_back(StoppingSpec::fixed(ft));
        }
    }
    auto cells = partition_support(model.mark_law, rng);
    std::vector<std::vector<CoefficientSpec>> coeffs(taus.size() + 1);
    for (auto& row : coeffs)
        for (std::size_t k = 0; k < cells.size(); ++k) row.push_back(random_coefficient(rng, T));
    return SimpleField(std::move(taus), std::move(cells), std::move(coeffs), model);
}

// Brute-force compensated integral: atom loop plus direct midpoint quadrature
// of lambda(s) * psi(s, z) over time pieces and mark subcells. Midpoint is
// exact here (lambda piecewise linear, psi piecewise constant) once the sum
// is split at the discontinuities, so this evaluates the integral without the
// per-cell mass bookkeeping of the implementation.
inline double brute_compensated_integral(const SimpleField& psi, const CompensatorModel& model,
                                         const CadlagPath& x, const AtomicMeasure& j, double t,
                                         int steps_per_piece = 16) {
    const auto bound = psi.bind(x, j);
    double atom_sum = 0.0;
    for (const auto& a : j.atoms()) {
        if (a.time > t) break;
        atom_sum += bound.evaluate(a.time, a.mark);
    }

    // time pieces: field grid plus intensity breakpoints
    std::vector<double> pieces{0.0, t};
    for (double tau : bound.tau)
        if (tau > 0.0 && tau < t) pieces.push_back(tau);
    for (double b : model.intensity.breakpoints(0.0, t, j)) pieces.push_back(b);
    std::sort(pieces.begin(), pieces.end());
    pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());

    // mark evaluation points: point masses directly, tables split at both the
    // table edges and the field cell edges
    struct ZPoint {
        Mark z;
        double weight;
    };
    std::vector<ZPoint> zpoints;
    const auto& law = model.mark_law;
    if (law.kind == MarkLaw::Kind::PointMasses) {
        for (const auto& [z, w] : law.masses) zpoints.push_back({z, w});
    } else {
        std::vector<double> zedges = law.edges;
        for (const auto& cell : psi.cells()) {
            for (double e : {cell.lo, cell.hi, -cell.lo, -cell.hi})
                if (e > law.edges.front() && e < law.edges.back()) zedges.push_back(e);
        }
        std::sort(zedges.begin(), zedges.end());
        zedges.erase(std::unique(zedges.begin(), zedges.end()), zedges.end());
        for (std::size_t q = 0; q + 1 < zedges.size(); ++q) {
            const double mid = 0.5 * (zedges[q] + zedges[q + 1]);
            double rho = 0.0;
            for (std::size_t c = 0; c < law.density.size(); ++c)
                if (mid > law.edges[c] && mid <= law.edges[c + 1]) rho = law.density[c];
            if (rho > 0.0) zpoints.push_back({scalar_mark(mid), rho * (zedges[q + 1] - zedges[q])});
        }
    }

    double mu_sum = 0.0;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double lo = pieces[p], hi = pieces[p + 1];
        if (hi <= lo) continue;
        const double h = (hi - lo) / steps_per_piece;
        for (int k = 0; k < steps_per_piece; ++k) {
            const double s = lo + (k + 0.5) * h;
            const double lam = model.intensity.value(s, j);
            double mark_part = 0.0;
            for (const auto& zp : zpoints) mark_part += zp.weight * bound.evaluate(s, zp.z);
            mu_sum += lam * mark_part * h;
        }
    }
    return atom_sum - mu_sum;
}

} // namespace testutil
