#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fdnet/errors.hpp"

namespace fdnet {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_depth = 40;
    // Uniform panels per sub-interval before adaptive refinement starts.
    int initial_panels = 8;
    std::size_t max_evaluations = 20'000'000;

    void validate() const {
        detail::require(rel_tol > 0.0 && abs_tol > 0.0, "quadrature tolerances must be > 0");
        detail::require(max_depth > 0 && initial_panels > 0, "quadrature depth/panels must be > 0");
    }
};

namespace detail {

template <class F>
class AdaptiveSimpson {
public:
    AdaptiveSimpson(F& f, const QuadratureSpec& spec) : f_(f), spec_(spec) {}

    double run(double a, double b) {
        const int n = spec_.initial_panels;
        const double h = (b - a) / n;

        // Coarse pass fixes the absolute error budget relative to the integral's size.
        std::vector<double> xs(2 * n + 1), fs(2 * n + 1);
        for (int i = 0; i <= 2 * n; ++i) {
            xs[i] = (i == 2 * n) ? b : a + 0.5 * h * i;
            fs[i] = eval(xs[i]);
        }
        double coarse = 0.0;
        std::vector<double> panel(n);
        for (int i = 0; i < n; ++i) {
            panel[i] = (xs[2 * i + 2] - xs[2 * i]) / 6.0 * (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2]);
            coarse += panel[i];
        }
        const double tol = std::max(spec_.abs_tol, spec_.rel_tol * std::abs(coarse));
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += refine(xs[2 * i], xs[2 * i + 2], fs[2 * i], fs[2 * i + 1], fs[2 * i + 2], panel[i],
                            tol / n, spec_.max_depth);
        }
        converged_ = residual_ <= tol;
        return total;
    }

    bool converged() const { return converged_; }
    double residual() const { return residual_; }
    std::size_t evaluations() const { return evals_; }

private:
    double eval(double x) {
        if (++evals_ > spec_.max_evaluations) throw NumericalError("quadrature exceeded evaluation budget");
        const double y = f_(x);
        if (!std::isfinite(y)) throw NumericalError("quadrature integrand is not finite at x=" + std::to_string(x));
        return y;
    }

    double refine(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = eval(lm), frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (depth <= 0 || m <= a || b <= m) {
            // Panels this narrow only survive at jumps or cusps; their leftover
            // error is charged to the global budget instead.
            residual_ += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    F& f_;
    const QuadratureSpec& spec_;
    std::size_t evals_ = 0;
    double residual_ = 0.0;
    bool converged_ = true;
};

} // namespace detail

struct QuadratureResult {
    double value = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

/// Adaptive Simpson integration of f over [a, b].
///
/// The interval is split at every breakpoint inside (a, b) so kinks and
/// near-singular points land on panel edges. Each piece gets the full
/// relative tolerance against its own magnitude. Panels still unresolved
/// at max_depth are accepted and their error estimates summed; the result
/// is flagged non-converged only if that sum exceeds the tolerance.
template <class F>
QuadratureResult integrate_detailed(F&& f, double a, double b, const QuadratureSpec& spec = {},
                                    std::span<const double> breakpoints = {}) {
    spec.validate();
    QuadratureResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        detail::AdaptiveSimpson<std::remove_reference_t<F>> q(f, spec);
        out.value += q.run(cuts[i], cuts[i + 1]);
        out.converged = out.converged && q.converged();
        out.evaluations += q.evaluations();
    }
    out.value *= sign;
    return out;
}

// Throws NumericalError if the adaptive scheme did not converge.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {},
                 std::span<const double> breakpoints = {}) {
    const auto r = integrate_detailed(std::forward<F>(f), a, b, spec, breakpoints);
    if (!r.converged) throw NumericalError("adaptive Simpson quadrature did not converge");
    return r.value;
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec, std::initializer_list<double> breakpoints) {
    return integrate(std::forward<F>(f), a, b, spec, std::span<const double>(breakpoints.begin(), breakpoints.size()));
}

} // namespace fdnet
