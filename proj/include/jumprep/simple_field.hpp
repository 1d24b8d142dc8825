#pragma once

#include <vector>

#include "jumprep/atoms.hpp"
#include "jumprep/cadlag_path.hpp"
#include "jumprep/compensator.hpp"
#include "jumprep/functional.hpp"
#include "jumprep/mark_region.hpp"

namespace jumprep {

// Scalar statistic of the stopped inputs: a path value x(t) or a cylindrical
// jump count over [0, t] x {1/alpha < |z| <= alpha}.
struct StatSpec {
    enum class Kind { PathValue, CylinderCount };

    Kind kind = Kind::PathValue;
    double time = 0.0;
    double alpha = 2.0;  // CylinderCount
    int coord = 0;       // PathValue coordinate

    double eval(const CadlagPath& x, const AtomicMeasure& j) const;
};

// Bounded Borel coefficient g = c0 + sum_r w_r * tanh(stat_r), evaluated on
// inputs stopped at the grid time.
struct CoefficientSpec {
    struct Term {
        StatSpec stat;
        double weight = 0.0;
    };

    double c0 = 0.0;
    std::vector<Term> terms;

    double eval(const CadlagPath& x_stopped, const AtomicMeasure& j_stopped) const;
};

// Grid point: a fixed time or a compensator-mass hitting time.
struct StoppingSpec {
    enum class Kind { Fixed, MassHit };

    Kind kind = Kind::Fixed;
    double time = 0.0;     // Fixed
    MarkRegion region;     // MassHit
    double eps = 0.0;

    static StoppingSpec fixed(double t);
    static StoppingSpec mass_hit(MarkRegion region, double eps);

    double eval(const CompensatorModel& model, const AtomicMeasure& j) const;
};

// Simple predictable functional field: piecewise constant in (t, z) over a
// stopping grid and disjoint mark cells, coefficients measurable at the left
// grid point. tau_0 = 0 and tau_{I+1} = T are implicit.
class SimpleField {
public:
    SimpleField(std::vector<StoppingSpec> taus, std::vector<MarkBand> cells,
                std::vector<std::vector<CoefficientSpec>> coeffs, CompensatorModel model);

    const std::vector<StoppingSpec>& taus() const { return taus_; }
    const std::vector<MarkBand>& cells() const { return cells_; }
    const std::vector<std::vector<CoefficientSpec>>& coeffs() const { return coeffs_; }
    const CompensatorModel& model() const { return model_; }

    // Grid and coefficient values frozen for one path.
    struct Bound {
        std::vector<double> tau;                  // size I+2, monotone, tau.front() = 0
        std::vector<std::vector<double>> value;   // (I+1) x K
        const SimpleField* parent = nullptr;

        double evaluate(double t, const Mark& z) const;
    };

    Bound bind(const CadlagPath& x, const AtomicMeasure& j) const;

    double evaluate(double t, const Mark& z, const CadlagPath& x, const AtomicMeasure& j) const;

    // union of the mark cells
    MarkRegion cells_region() const;

    // view as a generic predictable field (with the factorization left unset)
    PredictableField as_field() const;

    // exact pathwise integrals using per-cell compensator masses
    double integral(const CadlagPath& x, const AtomicMeasure& j, double t) const;        // d(J-mu)
    double mu_quadratic_mass(const CadlagPath& x, const AtomicMeasure& j, double t) const;  // psi^2 dmu

private:
    std::vector<StoppingSpec> taus_;
    std::vector<MarkBand> cells_;
    std::vector<std::vector<CoefficientSpec>> coeffs_;
    CompensatorModel model_;
};

// Simple coefficient process for the diffusion leg: piecewise constant on a
// stopping grid, no mark dependence.
class SimpleProcess {
public:
    SimpleProcess(std::vector<StoppingSpec> taus, std::vector<CoefficientSpec> coeffs,
                  CompensatorModel model);

    const std::vector<StoppingSpec>& taus() const { return taus_; }
    const std::vector<CoefficientSpec>& coeffs() const { return coeffs_; }

    double evaluate(double t, const CadlagPath& x, const AtomicMeasure& j) const;

    // pathwise Riemann-Stieltjes sum: sum_i phi_i (x(tau_{i+1} ^ t) - x(tau_i ^ t))
    double integral(const CadlagPath& x, const AtomicMeasure& j, double t, int coord = 0) const;

private:
    std::vector<StoppingSpec> taus_;
    std::vector<CoefficientSpec> coeffs_;
    CompensatorModel model_;
};

// free-function form of the exact Riemann-Stieltjes sum
double diffusion_integral(const SimpleProcess& phi, const CadlagPath& x, const AtomicMeasure& j,
                          double t, int coord = 0);

} // namespace jumprep
