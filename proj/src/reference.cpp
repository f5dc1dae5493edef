#include "stablelab/reference.hpp"

#include <algorithm>
#include <cmath>

#include "stablelab/quadrature.hpp"
#include "stablelab/stable_measure.hpp"

namespace stablelab {

ReferenceValue extrapolated_reference(const std::vector<LevelValue>& levels) {
    if (levels.size() < 3) throw UsageError("extrapolated_reference: need at least 3 levels");
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        if (levels[i + 1].n != 2 * levels[i].n)
            throw UsageError("extrapolated_reference: levels must double n");
    }
    const LevelValue& a = levels[levels.size() - 3];
    const LevelValue& b = levels[levels.size() - 2];
    const LevelValue& c = levels[levels.size() - 1];
    const double d1 = a.value - b.value;
    const double d2 = b.value - c.value;
    const double cert_d = a.certificate + 2.0 * b.certificate + c.certificate;
    if (d1 * d2 <= 0.0 || std::abs(d2) >= std::abs(d1)) {
        if (std::max(std::abs(d1), std::abs(d2)) > cert_d)
            throw ExtrapolationError(
                "extrapolated_reference: level differences are not monotone beyond certificates");
        // Differences at the certificate floor: the finest value is already
        // converged to within its certificate.
        ReferenceValue r;
        r.value = c.value;
        r.method = ReferenceMethod::extrapolated;
        r.certified_error = c.certificate + std::abs(d2);
        r.fitted_order = 0.0;
        return r;
    }
    const double gamma = std::log2(d1 / d2);
    const double vinf = c.value - d2 / (std::pow(2.0, gamma) - 1.0);
    ReferenceValue r;
    r.value = vinf;
    r.method = ReferenceMethod::extrapolated;
    r.certified_error = std::abs(c.value - vinf) + c.certificate;
    r.fitted_order = gamma;
    return r;
}

Certified sigma_alpha(double alpha, double tol) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("sigma_alpha: alpha must lie in (0,2)");
    // 2 int_0^1 with the cancellation-safe form 1 - cos r = 2 sin^2(r/2).
    auto kernel = [alpha](double r) {
        const double s = std::sin(0.5 * r);
        return 2.0 * (2.0 * s * s) * std::pow(r, -1.0 - alpha);
    };
    Certified head = integrate_adaptive(kernel, 0.0, 1.0, 0.25 * tol, 400000);
    // Oscillatory middle out to R (width-capped panels so the estimate stays
    // honest), then exact power tail minus an integration-by-parts remainder
    // bound for the cosine part.
    const double R = std::max(50.0, std::pow(24.0 / tol, 1.0 / (2.0 + alpha)));
    Certified mid = integrate_bounded_panels(kernel, 1.0, R, 1.0);
    Certified out = head + mid;
    out.value += 2.0 * std::pow(R, -alpha) / alpha;
    // |int_R^inf cos r r^{-1-a} dr| <= via two-fold IBP:
    //   sin R R^{-1-a} - (1+a) cos R R^{-2-a} + O((1+a)(2+a) R^{-3-a}).
    out.value -= 2.0 * (std::sin(R) * std::pow(R, -1.0 - alpha) -
                        (1.0 + alpha) * std::cos(R) * std::pow(R, -2.0 - alpha));
    out.error_bound += 2.0 * (1.0 + alpha) * (2.0 + alpha) * std::pow(R, -3.0 - alpha);
    return out;
}

namespace {

// Frequency cutoff with exp(-theta xi^a) <= floor beyond it, plus the exact
// bound int_Xi^inf e^{-theta xi^a} dxi <= e^{-theta Xi^a}/(theta Xi^{a-1}).
double frequency_cutoff(double theta, double alpha, double floor) {
    const double x = std::max(1.0, std::log(1.0 / floor) / theta);
    return std::pow(x, 1.0 / alpha);
}

double exp_tail_bound(double theta, double alpha, double xi) {
    return std::exp(-theta * std::pow(xi, alpha)) / (theta * std::pow(xi, alpha - 1.0));
}

}  // namespace

Certified symmetric_stable_cdf(double t, double c, double alpha, double y, double tol) {
    const double theta = t * c * sigma_alpha(alpha, 1e-12).value;
    if (!(theta > 0.0)) throw DomainError("symmetric_stable_cdf: needs t, c > 0");
    const double cut = frequency_cutoff(theta, alpha, 1e-18);
    auto integrand = [&](double xi) {
        if (xi == 0.0) return y;
        return std::sin(y * xi) * std::exp(-theta * std::pow(xi, alpha)) / xi;
    };
    const double panel = std::min(1.0, 3.0 / (std::abs(y) + 1.0));
    Certified I = integrate_bounded_panels(integrand, 0.0, cut, panel);
    const double pi = std::acos(-1.0);
    Certified out;
    out.value = 0.5 + I.value / pi;
    // Tail: |sin(y xi)/xi| <= 1/xi <= 1/cut.
    out.error_bound = I.error_bound / pi + exp_tail_bound(theta, alpha, cut) / (cut * pi);
    return out;
}

Certified symmetric_stable_density(double t, double c, double alpha, double y, double tol) {
    const double theta = t * c * sigma_alpha(alpha, 1e-12).value;
    if (!(theta > 0.0)) throw DomainError("symmetric_stable_density: needs t, c > 0");
    const double cut = frequency_cutoff(theta, alpha, 1e-18);
    auto integrand = [&](double xi) {
        return std::cos(y * xi) * std::exp(-theta * std::pow(xi, alpha));
    };
    const double panel = std::min(1.0, 3.0 / (std::abs(y) + 1.0));
    Certified I = integrate_bounded_panels(integrand, 0.0, cut, panel);
    const double pi = std::acos(-1.0);
    return {I.value / pi, I.error_bound / pi + exp_tail_bound(theta, alpha, cut) / pi};
}

ReferenceValue fourier_oracle(const TestFunction& phi, double t, double alpha, double c, double x,
                              double tol) {
    if (!phi.window)
        throw CapabilityError("fourier_oracle: phi must be windowed (constant outside a compact set)");
    if (!(c > 0.0)) throw CapabilityError("fourier_oracle: symmetric weight must be positive");
    const Window& w = *phi.window;
    const double theta = t * c * sigma_alpha(alpha, 1e-12).value;

    // Plateau parts through the inverted CDF.
    Certified lowcdf = symmetric_stable_cdf(t, c, alpha, w.lo - x, 0.05 * tol);
    Certified hicdf = symmetric_stable_cdf(t, c, alpha, w.hi - x, 0.05 * tol);
    Certified out;
    out.value = w.value_left * lowcdf.value + w.value_right * (1.0 - hicdf.value);
    out.error_bound = std::abs(w.value_left) * lowcdf.error_bound +
                      std::abs(w.value_right) * hicdf.error_bound;

    // Compact part: phi = phi_c + plateau steps with phi_c supported on the
    // window; swap the y and frequency integrals:
    // int phi_c(x+y) p_t(y) dy
    //   = (1/pi) int_0^inf e^{-theta xi^a} [int phi_c(x+y) cos(y xi) dy] dxi.
    auto phi_c = [&](double y) {
        const double z = x + y;
        if (z <= w.lo || z >= w.hi) return 0.0;
        return phi(z);
    };
    const double ylo = w.lo - x, yhi = w.hi - x;
    // Subtract the plateau values inside the window so phi_c is the bounded
    // compact residual: phi(x+y) = phi_c(y) + step parts; on (lo,hi) the
    // step parts vanish, so phi_c = phi there.
    auto inner = [&](double xi) {
        auto fy = [&](double y) { return phi_c(y) * std::cos(y * xi); };
        const int panels = std::max(8, static_cast<int>((yhi - ylo) * xi / 3.0) + 1);
        double s = 0.0;
        const double step = (yhi - ylo) / panels;
        for (int i = 0; i < panels; ++i)
            s += gl_integrate(fy, ylo + i * step, ylo + (i + 1) * step, 12);
        return s;
    };
    const double cut = frequency_cutoff(theta, alpha, 1e-16);
    auto freq_integrand = [&](double xi) {
        return std::exp(-theta * std::pow(xi, alpha)) * inner(xi);
    };
    const double pi = std::acos(-1.0);
    const double panel = std::min(0.5, 6.0 / (yhi - ylo + 1.0));
    Certified compact = integrate_bounded_panels(freq_integrand, 0.0, cut, panel);
    out.value += compact.value / pi;
    out.error_bound += compact.error_bound / pi +
                       phi.sup_norm * (yhi - ylo) * exp_tail_bound(theta, alpha, cut) / pi;

    ReferenceValue r;
    r.value = out.value;
    r.method = ReferenceMethod::fourier_oracle;
    r.certified_error = out.error_bound;
    return r;
}

double consistency_residual(const MollifiedFn& v, double t, double x, double h,
                            const SublinearSpace& space, const StableConfig& cfg, double tol) {
    if (!(t >= h)) throw DomainError("consistency_residual: needs t >= h");
    const double dt = v.derivative(1, 0, t, x);
    TestFunction slice_t = v.x_slice(t);
    const Certified nl = sup_nonlocal(slice_t, x, space.uncertainty(), cfg, tol);
    TestFunction slice_prev = v.x_slice(t - h);
    const Certified shifted = expect_shifted(space, slice_prev, x, h);
    const double one_step = (v.value(t, x) - shifted.value) / h;
    return std::abs(dt - nl.value - one_step);
}

}  // namespace stablelab
