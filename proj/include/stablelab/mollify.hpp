#pragma once

#include <functional>
#include <map>
#include <utility>

#include "stablelab/common.hpp"
#include "stablelab/test_function.hpp"

namespace stablelab {

/// Anisotropic mollification scale: time window eps^p, space window eps.
/// Callers set p = alpha/delta.
struct MollifierParams {
    double epsilon;
    double p;
    int quad_order = 32;  // tensor Gauss-Legendre order per axis
};

/// The smooth kernel zeta(tau, e) = zeta_t(tau) zeta_x(e): a tensor product
/// of compactly supported bumps, time factor on [-1,0], even space factor
/// on [-1,1], normalized to unit integral.
namespace mollifier_kernel {
double value(double tau, double e);
double time_factor(double tau, int deriv_order);
double space_factor(double e, int deriv_order);
/// int int |d_t^l D_x^k zeta| over the support (kernel-moment constants).
double abs_moment(int l, int k);
/// int e * zeta_x(e) de (zero by evenness; measured for the audit).
double space_first_moment();
}  // namespace mollifier_kernel

/// A bounded space-time function with Holder-1/p regularity in t and
/// Lipschitz in x: |v(t,x)-v(s,y)| <= C (|t-s|^{1/p} + |x-y|).
/// The optional window declares x-constancy (uniform in t) outside [lo,hi].
struct HolderLipschitzFn {
    std::function<double(double, double)> eval;  // (t, x)
    double holder_lipschitz_const;               // C above
    double sup_norm;
    std::optional<Window> window;
};

/// The mollification v^eps with kernel-differentiated derivative
/// evaluators. v is extended past t = 1 by v(1, .), which preserves the
/// modulus.
class MollifiedFn {
  public:
    MollifiedFn(HolderLipschitzFn v, MollifierParams params);

    double value(double t, double x) const;
    /// d_t^l D_x^k v^eps by differentiating the kernel; l + k <= 3.
    double derivative(int l, int k, double t, double x) const;

    const MollifierParams& params() const { return params_; }
    const HolderLipschitzFn& base() const { return v_; }

    /// The x-slice as a TestFunction with derivative evaluators and the
    /// displayed norm bounds 2 C eps^{1-pl-k}.
    TestFunction x_slice(double t) const;

  private:
    HolderLipschitzFn v_;
    MollifierParams params_;
    double base_extended(double t, double x) const;
};

MollifiedFn mollify(const HolderLipschitzFn& v, const MollifierParams& params);

/// The displayed derivative-norm bounds 2 C eps^{1-pl-k} for l+k <= 3.
std::map<std::pair<int, int>, double> derivative_norm_bounds(const MollifierParams& params,
                                                             double C);

}  // namespace stablelab
