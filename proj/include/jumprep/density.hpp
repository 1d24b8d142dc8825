#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jumprep/compensator.hpp"
#include "jumprep/mark_region.hpp"
#include "jumprep/simulate.hpp"

namespace jumprep {

// Random mu-equidistant partition of [0, T] for one region: mass levels
// i * 2^-n, capped at total mass 2^n and at the horizon. Generation stops at
// the first pinned index (or at the hard index bound 2^(2^n) for small n).
struct RandomPartition {
    int level = 1;
    MarkRegion region;
    std::vector<double> times;  // monotone, times[0] = 0
    bool saturated = false;     // last entry pinned at T or at the mass cap
};

RandomPartition random_partition(const CompensatorModel& model, const AtomicMeasure& j,
                                 const MarkRegion& K, int n);

// Square-integrable random field f(t, z, scenario).
struct RandomField {
    std::function<double(double, const Mark&, const Scenario&)> evaluate;
    std::optional<double> bound;  // sup norm when known
};

// Piecewise-constant field on per-cell random partitions, bound to one
// scenario. observed_f_sup is the largest |f| seen at the quadrature nodes
// used for the averages, which dominates every cell average by construction.
class GridField {
public:
    struct Cell {
        MarkBand band;
        RandomPartition part;
        std::vector<double> value;  // one entry per partition interval
    };

    std::vector<Cell> cells;
    double observed_f_sup = 0.0;

    double evaluate(double t, const Mark& z) const;
    double sup_abs() const;
};

// One-step-lag cell averaging: the value on (t_i, t_{i+1}] x Z_k is the
// mu-average of f over the previous time cell (t_{i-1}, t_i] x Z_k, with
// 0/0 = 0. The lag keeps the output predictable.
GridField apply_A(const RandomField& f, const std::vector<MarkBand>& cells, int n,
                  const CompensatorModel& model, const Scenario& sc);

// Same-cell averaging (anticipative): the value on (t_{i-1}, t_i] x Z_k is
// the mu-average of f over that same cell.
GridField apply_B(const RandomField& f, const std::vector<MarkBand>& cells, int l,
                  const CompensatorModel& model, const Scenario& sc);

// || g - f ||^2 in L2(mu) over [0, T] x (union of cells) for one scenario.
double l2_mu_error(const GridField& g, const RandomField& f, const std::vector<MarkBand>& cells,
                   const CompensatorModel& model, const Scenario& sc);

// || f ||^2 in L2(mu) over the cells for one scenario.
double l2_mu_norm2(const RandomField& f, const std::vector<MarkBand>& cells,
                   const CompensatorModel& model, const Scenario& sc);

struct FieldNormReport {
    std::vector<int> levels;
    std::vector<double> l2_error;      // MC mean of ||A_n f - f||^2
    std::vector<double> l2_error_se;
    std::vector<double> a_norm2;       // MC mean of ||A_n f||^2
    std::vector<double> f_norm2;       // MC mean of ||f||^2
    double sup_norm = 0.0;             // largest |A f| across paths and levels
    bool sup_contraction_ok = true;    // per-path |A f| <= observed sup |f|
    int monotone_decreases = 0;
    bool strictly_decreasing = false;
};

// MC table of ||A_{mn} f - f||^2 over the level range, with the per-path
// sup-contraction check folded in. Unbounded fields are clipped at
// |f| <= clip when clip > 0.
FieldNormReport convergence_sweep(const RandomField& f, const std::vector<MarkBand>& cells,
                                  const std::vector<int>& levels, const CompensatorModel& model,
                                  double T, int n_steps, std::size_t n_paths, std::uint64_t seed,
                                  double clip = 0.0);

} // namespace jumprep
