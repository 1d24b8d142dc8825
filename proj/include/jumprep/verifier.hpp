#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jumprep/compensator.hpp"
#include "jumprep/functional.hpp"
#include "jumprep/simple_field.hpp"
#include "jumprep/simulate.hpp"
#include "jumprep/stats.hpp"

namespace jumprep {

// Monte Carlo estimate bundle. std_error is the sample standard deviation of
// the reported comparison statistic divided by sqrt(n); pass is defined only
// when a target is present (|estimate - target| within 3 std errors, plus any
// stated allowance).
struct McReport {
    std::string label;
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::optional<double> target;
    bool pass = false;
    double runtime_s = 0.0;
};

// Per-scenario view of a representation case: the candidate martingale's
// endpoint values and its integrand legs along the path. Closures capture the
// scenario state; time lookups follow the path's step convention with left
// limits at jump times.
struct CaseEvaluator {
    double y_start = 0.0;
    double y_end = 0.0;

    // phi(t): integrand against the continuous martingale part of x
    std::function<double(double)> diffusion_integrand;

    // psi(t, z): integrand against the compensated jump measure
    std::function<double(double, const Mark&)> jump_integrand;

    // optional closed form of t -> integral of psi(t, z) nu(dz); when absent
    // the mark law is integrated numerically per segment
    std::function<double(double)> jump_mark_integral;
};

// A candidate martingale with its scenario generator and integrands; the
// plain Functional form of Y is kept alongside for pathwise probes.
struct RepresentationCase {
    std::string label;
    LevyParams levy;
    double horizon = 1.0;
    std::function<CaseEvaluator(const Scenario&)> evaluator;
    Functional functional;
};

// Grid allowance for residual checks: delta = coeff / sqrt(n_steps). The
// coefficient is the RMS constant of the quadratic Brownian baseline
// functional x(T)^2 - T, whose residual is exactly the quadratic-variation
// discretization error.
inline constexpr double kGridAllowanceCoeff = 1.0;

struct ResidualReport {
    McReport summary;          // estimate = RMS relative residual
    double rel_residual = 0.0;
    double se_rel = 0.0;
    double grid_allowance = 0.0;
    double mean_y2 = 0.0;
    long rejected_paths = 0;   // non-finite per-path values; must be 0 to pass
};

struct MeasureChangeReport {
    double max_field_gap = 0.0;  // pathwise probe discrepancy
    bool pathwise_pass = false;
    McReport innovation;         // signed innovation mean under the tilted law
    bool pass = false;
};

struct RegressionBin {
    double t0 = 0.0, t1 = 0.0;
    MarkBand band;
    double estimate = 0.0;   // projection of Y(T) innovations on the bin indicator
    double se = 0.0;
    double closed_avg = 0.0; // mu-average of the closed integrand over the bin
    long atom_count = 0;
    bool empty = false;
    bool pass = false;
};

struct RegressionTable {
    std::vector<RegressionBin> bins;
    bool pass = false;
};

// Pure-jump scenario drawn from an arbitrary compensator model (flat path).
Scenario sample_model_scenario(const CompensatorModel& model, double T, int n_steps,
                               std::uint64_t master_seed, std::uint64_t path_index);

// E[(I psi)^2] against E[int psi^2 dmu], paired per path; pass when the paired
// difference is within 3 standard errors.
McReport isometry_check(const SimpleField& psi, const CompensatorModel& model, double T,
                        std::size_t n_paths, std::uint64_t seed, int n_steps = 8);

// RMS relative residual of Y(T) - Y(0) - diffusion leg - compensated jump
// leg; pass when residual <= 3 se + kGridAllowanceCoeff / sqrt(n_steps).
ResidualReport mrt_residual(const RepresentationCase& rc, std::size_t n_paths, int n_steps,
                            std::uint64_t seed);

// signed mean of the same per-path residual (used by the tilted innovation
// test); optional scenario override for sampling under another law
McReport residual_innovation(const RepresentationCase& rc, const LevyParams& sample_params,
                             std::size_t n_paths, int n_steps, std::uint64_t seed);

// E[Y(T) I_mu(psi)(T)] against E[int nabla Y psi dmu], paired per path.
McReport adjoint_check(const RepresentationCase& rc, const SimpleField& psi, std::size_t n_paths,
                       int n_steps, std::uint64_t seed);

// Pathwise field-equality probe plus innovation test under a tilted law.
MeasureChangeReport measure_change_invariance(const RepresentationCase& rc, const TiltSpec& spec,
                                              std::size_t n_paths, int n_steps,
                                              std::uint64_t seed, std::size_t probe_scenarios = 32,
                                              std::size_t probes_per_scenario = 16,
                                              double probe_tol = 1e-9);

// Nonparametric per-bin estimate of the jump integrand from Y(T) innovations,
// compared with the closed integrand's mu-average bin by bin.
RegressionTable integrand_regression_oracle(const RepresentationCase& rc, int time_bins,
                                            const std::vector<MarkBand>& mark_bins,
                                            std::size_t n_paths, int n_steps, std::uint64_t seed);

// Levy parameters equivalent to sampling under the tilted compensator (the
// constant-in-time factor folds into the mark-law mass).
LevyParams tilted_params(const LevyParams& params, const TiltSpec& spec);

} // namespace jumprep
