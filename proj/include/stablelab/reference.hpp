#pragma once

#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/mollify.hpp"
#include "stablelab/sublinear.hpp"
#include "stablelab/test_function.hpp"

namespace stablelab {

enum class ReferenceMethod { extrapolated, fourier_oracle };

struct ReferenceValue {
    double value = 0.0;
    ReferenceMethod method = ReferenceMethod::extrapolated;
    double certified_error = 0.0;
    double fitted_order = 0.0;  // extrapolation only
};

/// Center value with its scheme certificate at one refinement level.
struct LevelValue {
    long n;
    double value;
    double certificate;
};

/// Fits value_inf + C h^gamma through the three finest geometric levels
/// (gamma free) and returns value_inf with certified error
/// |finest - value_inf| + finest certificate. Throws ExtrapolationError if
/// the level differences are not same-signed and shrinking beyond the
/// certificates.
ReferenceValue extrapolated_reference(const std::vector<LevelValue>& levels);

/// sigma_a = 2 int_0^inf (1 - cos r) r^{-1-a} dr, by quadrature with a
/// certified oscillatory tail (sigma_1 = pi).
Certified sigma_alpha(double alpha, double tol = 1e-10);

/// P(Y_t <= y) for the symmetric alpha-stable semigroup with generator
/// c int delta_l^a . |l|^{-1-a} dl, i.e. characteristic function
/// exp(-t c sigma_a |xi|^a) (Gil-Pelaez inversion).
Certified symmetric_stable_cdf(double t, double c, double alpha, double y, double tol = 1e-9);

/// Density of the same law by cosine inversion.
Certified symmetric_stable_density(double t, double c, double alpha, double y, double tol = 1e-9);

/// u(t,x) = int phi(x+y) p_t(y) dy for the degenerate (singleton,
/// symmetric) uncertainty set with weight c on both spectral atoms.
/// phi must be windowed; the compact part integrates against the kernel in
/// frequency space, the plateau parts use the inverted CDF.
ReferenceValue fourier_oracle(const TestFunction& phi, double t, double alpha, double c,
                              double x = 0.0, double tol = 1e-7);

/// |d_t v(t,x) - sup-nonlocal v(t,.)(x) - h^{-1}(v(t,x) - E^[v(t-h, x + h^{1/a} Z)])|:
/// the consistency residual of the one-step operator on a smooth function.
double consistency_residual(const MollifiedFn& v, double t, double x, double h,
                            const SublinearSpace& space, const StableConfig& cfg,
                            double tol = 1e-8);

}  // namespace stablelab
