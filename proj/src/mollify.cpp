#include "stablelab/mollify.hpp"

#include <cmath>
#include <mutex>

#include "stablelab/quadrature.hpp"

namespace stablelab {

namespace {

// Bump b(s) = exp(-1/(1-s^2)) on (-1,1) and its derivatives via
// g = -1/(1-s^2): b' = b g', b'' = b (g'' + g'^2), b''' = b (g''' + 3 g'' g' + g'^3).
double bump_raw(double s, int order) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    const double b = std::exp(-1.0 / q);
    if (order == 0) return b;
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    const double g1 = -2.0 * s / q2;
    if (order == 1) return b * g1;
    const double g2 = -2.0 / q2 - 8.0 * s * s / q3;
    if (order == 2) return b * (g2 + g1 * g1);
    const double g3 = -24.0 * s / q3 - 48.0 * s * s * s / q4;
    if (order == 3) return b * (g3 + 3.0 * g2 * g1 + g1 * g1 * g1);
    throw CapabilityError("mollifier kernel derivatives available up to order 3");
}

struct KernelNorms {
    double nx = 0.0;  // space bump normalizer
    double nt = 0.0;  // time bump normalizer
};

const KernelNorms& kernel_norms() {
    static KernelNorms k = [] {
        KernelNorms r;
        const double ix =
            integrate_adaptive([](double s) { return bump_raw(s, 0); }, -1.0, 1.0, 1e-14).value;
        r.nx = 1.0 / ix;
        // Time factor lives on [-1,0]; same bump reparametrized by m = 2 tau + 1.
        const double it = integrate_adaptive(
                              [](double tau) { return bump_raw(2.0 * tau + 1.0, 0); }, -1.0, 0.0,
                              1e-14)
                              .value;
        r.nt = 1.0 / it;
        return r;
    }();
    return k;
}

}  // namespace

namespace mollifier_kernel {

double space_factor(double e, int deriv_order) { return kernel_norms().nx * bump_raw(e, deriv_order); }

double time_factor(double tau, int deriv_order) {
    if (tau <= -1.0 || tau >= 0.0) return 0.0;
    const double scale = std::pow(2.0, deriv_order);
    return kernel_norms().nt * scale * bump_raw(2.0 * tau + 1.0, deriv_order);
}

double value(double tau, double e) { return time_factor(tau, 0) * space_factor(e, 0); }

double abs_moment(int l, int k) {
    auto at = integrate_adaptive(
        [&](double tau) { return std::abs(time_factor(tau, l)); }, -1.0, 0.0, 1e-12);
    auto ax = integrate_adaptive([&](double e) { return std::abs(space_factor(e, k)); }, -1.0, 1.0,
                                 1e-12);
    return at.value * ax.value;
}

double space_first_moment() {
    return integrate_adaptive([](double e) { return e * space_factor(e, 0); }, -1.0, 1.0, 1e-13)
        .value;
}

}  // namespace mollifier_kernel

MollifiedFn::MollifiedFn(HolderLipschitzFn v, MollifierParams params)
    : v_(std::move(v)), params_(params) {
    if (!(params_.epsilon > 0.0 && params_.epsilon < 1.0))
        throw DomainError("mollifier: epsilon must lie in (0,1)");
    if (!(params_.p > 1.0)) throw DomainError("mollifier: p must exceed 1");
}

double MollifiedFn::base_extended(double t, double x) const {
    return v_.eval(std::min(t, 1.0), x);
}

double MollifiedFn::value(double t, double x) const { return derivative(0, 0, t, x); }

double MollifiedFn::derivative(int l, int k, double t, double x) const {
    if (l < 0 || k < 0 || l + k > 3)
        throw CapabilityError("mollified derivatives available for l+k <= 3");
    const double eps = params_.epsilon;
    const double epsp = std::pow(eps, params_.p);
    const GaussLegendre& g = gauss_legendre(params_.quad_order);
    // v^eps(t,x) = int_{-1}^{0} int_{-1}^{1} v(t - epsp s, x - eps w) zeta(s,w) dw ds,
    // with derivatives moved onto the kernel:
    // d_t^l D_x^k v^eps = eps^{-k} epsp^{-l} int int v(...) zeta_t^(l)(s) zeta_x^(k)(w) dw ds.
    double total = 0.0;
    for (int i = 0; i < params_.quad_order; ++i) {
        const double s = -0.5 + 0.5 * g.nodes[i];  // map [-1,1] -> [-1,0]
        const double wt = 0.5 * g.weights[i] * mollifier_kernel::time_factor(s, l);
        if (wt == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < params_.quad_order; ++j) {
            const double w = g.nodes[j];
            const double wx = g.weights[j] * mollifier_kernel::space_factor(w, k);
            if (wx == 0.0) continue;
            inner += wx * base_extended(t - epsp * s, x - eps * w);
        }
        total += wt * inner;
    }
    return total * std::pow(eps, -k) * std::pow(epsp, -l);
}

TestFunction MollifiedFn::x_slice(double t) const {
    TestFunction tf;
    tf.name = "mollified-slice";
    MollifiedFn self = *this;
    tf.f = [self, t](double x) { return self.value(t, x); };
    tf.derivs[0] = [self, t](double x) { return self.derivative(0, 1, t, x); };
    tf.derivs[1] = [self, t](double x) { return self.derivative(0, 2, t, x); };
    tf.derivs[2] = [self, t](double x) { return self.derivative(0, 3, t, x); };
    const double C = v_.holder_lipschitz_const;
    auto bounds = derivative_norm_bounds(params_, C);
    tf.sup_norm = v_.sup_norm;
    tf.lipschitz = std::min(C, bounds[{0, 1}]);
    tf.deriv_norms = {bounds[{0, 1}], bounds[{0, 2}], bounds[{0, 3}]};
    if (v_.window) {
        tf.window = Window{v_.window->lo - params_.epsilon, v_.window->hi + params_.epsilon,
                           v_.window->value_left, v_.window->value_right};
    }
    return tf;
}

MollifiedFn mollify(const HolderLipschitzFn& v, const MollifierParams& params) {
    return MollifiedFn(v, params);
}

std::map<std::pair<int, int>, double> derivative_norm_bounds(const MollifierParams& params,
                                                             double C) {
    std::map<std::pair<int, int>, double> out;
    for (int l = 0; l <= 3; ++l)
        for (int k = 0; l + k <= 3; ++k)
            out[{l, k}] = 2.0 * C * std::pow(params.epsilon, 1.0 - params.p * l - k);
    return out;
}

}  // namespace stablelab
