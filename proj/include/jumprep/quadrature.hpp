#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace jumprep {

namespace detail {

template <typename Fn>
double simpson_rule(Fn& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename Fn>
double adaptive_simpson_rec(Fn& f, double a, double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(f, a, fa, m, fm, lm, flm);
    const double right = simpson_rule(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson with a relative tolerance (abs floor for near-zero values).
template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, double rel_tol = 1e-8,
                        double abs_floor = 1e-14, int max_depth = 32) {
    if (!(b >= a)) throw std::domain_error("adaptive_simpson: b < a");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_rule(f, a, fa, b, fb, m, fm);
    const double tol = std::max(abs_floor, rel_tol * std::abs(whole));
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Fixed 4-point Gauss-Legendre on [a, b]; cheap rule for smooth cell integrands.
template <typename Fn>
double gauss4(Fn&& f, double a, double b) {
    static const double xs[2] = {0.3399810435848562648026658, 0.8611363115940525752239465};
    static const double ws[2] = {0.6521451548625461426269361, 0.3478548451374538573730639};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 2; ++i)
        acc += ws[i] * (f(c - h * xs[i]) + f(c + h * xs[i]));
    return acc * h;
}

} // namespace jumprep
