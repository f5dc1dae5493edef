#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stablelab/common.hpp"

namespace stablelab {

using RealFn = std::function<double(double)>;

/// Nodes/weights of an n-point Gauss-Legendre rule on [-1,1].
/// Cached per n; thread-safe after first use of a given n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

/// Fixed n-point Gauss-Legendre quadrature of f on [a,b].
double gl_integrate(const RealFn& f, double a, double b, int n);

/// Adaptive Gauss-Kronrod (G7,K15) quadrature on [a,b].
///
/// Splits intervals until the summed |K15-G7| estimate is below abs_tol or
/// the node budget is exhausted. Deterministic: the subdivision order is a
/// fixed depth-first recursion, independent of thread schedule.
///
/// Throws AccuracyError (carrying the achieved bound) if abs_tol is
/// unreachable within max_evals.
Certified integrate_adaptive(const RealFn& f, double a, double b, double abs_tol,
                             int max_evals = 200000);

/// Adaptive quadrature with interior breakpoints (integrand may kink or jump
/// there). Each smooth piece is integrated separately; certificates add.
Certified integrate_adaptive_pieces(const RealFn& f, std::span<const double> breakpoints,
                                    double abs_tol, int max_evals = 200000);

/// Non-recursive composite GK15 with a hard cap on the panel width, for
/// oscillatory integrands over long ranges where nested bisection can stop
/// on a falsely small error estimate. Panels grow geometrically from the
/// left endpoint until they reach max_width, then stay fixed. The
/// certificate is the summed per-panel estimate.
Certified integrate_bounded_panels(const RealFn& f, double a, double b, double max_width,
                                   double growth = 1.25);

/// Least-squares straight line y = intercept + slope*x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double max_abs_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace stablelab
