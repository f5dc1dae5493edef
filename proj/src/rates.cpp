#include "stablelab/rates.hpp"

#include <algorithm>
#include <cmath>

#include "stablelab/quadrature.hpp"

namespace stablelab {

ErrorBudget make_error_budget(const TestFunction& phi, const StableConfig& cfg, double m_delta,
                              double c_beta) {
    ErrorBudget b;
    b.C_phi = phi.lipschitz;
    b.sup_phi = phi.sup_norm;
    b.M_delta = m_delta;
    b.C_beta = c_beta;
    b.K = std::max(std::pow(phi.lipschitz, cfg.delta) *
                       std::pow(2.0 * phi.sup_norm, 1.0 - cfg.delta) * m_delta,
                   phi.lipschitz);
    return b;
}

double gamma_rate(const StableConfig& cfg, double q0) {
    if (!(q0 > 0.0)) throw DomainError("gamma_rate: q0 must be positive");
    const double a = cfg.alpha, d = cfg.delta;
    switch (cfg.regime) {
        case Regime::super_one:
            return std::min((2.0 - a) / (2.0 * a), 0.5 * q0);
        case Regime::critical_one:
            return std::min({0.5 * d, d * d / (1.0 + d * d), 0.5 * q0});
        case Regime::sub_one:
            return std::min({d / (2.0 * a), d * d / (a * (a + d * d)), (1.0 - a) / a, a * q0});
    }
    return 0.0;
}

double gamma_rate_example(const StableConfig& cfg, const TailCoefficients& tails, double eps0) {
    const double a = cfg.alpha, d = cfg.delta, b = tails.beta;
    if (!(b > a)) throw DomainError("gamma_rate_example: beta must exceed alpha");
    switch (cfg.regime) {
        case Regime::super_one:
            if (b == 2.0) return (2.0 - a) / (2.0 * a) - eps0;
            return std::min((b - a) / (2.0 * a), (2.0 - a) / (2.0 * a));
        case Regime::sub_one:
            if (b == 1.0)
                return std::min({d / (2.0 * a), d * d / (a * (a + d * d)), 1.0 - a - eps0});
            return std::min({d / (2.0 * a), d * d / (a * (a + d * d)), b - a, 1.0 - a});
        case Regime::critical_one:
            if (b == 2.0) return std::min({0.5 * d, d * d / (1.0 + d * d), 0.5 - eps0});
            return std::min({0.5 * d, d * d / (1.0 + d * d), 0.5 * (b - 1.0)});
    }
    return 0.0;
}

double epsilon_schedule(double h, const StableConfig& cfg, double q0) {
    if (!(h > 0.0 && h < 1.0)) throw DomainError("epsilon_schedule: h must lie in (0,1)");
    return std::pow(h, gamma_rate(cfg, q0));
}

double l_phi_bound(const StableConfig& cfg, const PhiNorms& norms, double c_beta, double q0,
                   double s) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("l_phi_bound: s must lie in (0,1]");
    const double a = cfg.alpha;
    switch (cfg.regime) {
        case Regime::super_one:
            return (16.0 * c_beta * norms.d1 + 2.0 * c_beta * norms.d2) * std::pow(s, q0) +
                   4.0 * c_beta * norms.d2 * std::pow(s, (2.0 - a) / a);
        case Regime::sub_one:
            return 8.0 * c_beta * norms.d1 * std::pow(s, q0) +
                   4.0 * c_beta * norms.d1 * std::pow(s, (1.0 - a) / a) +
                   c_beta * (8.0 * norms.sup + 2.0 / (1.0 - a) * norms.d1) * std::pow(s, a * q0);
        case Regime::critical_one:
            return 3.0 * c_beta * norms.d2 * s +
                   (4.0 * norms.d2 + 2.0 * (1.0 + 1.0 / q0) * norms.d1) * c_beta * std::pow(s, q0);
    }
    return 0.0;
}

RhoBounds rho_bounds(double eps, double h, const StableConfig& cfg, const ErrorBudget& budget,
                     const std::function<double(double)>& l_eval) {
    if (!(eps > 0.0 && eps <= 1.0) || !(h > 0.0 && h < 1.0))
        throw DomainError("rho_bounds: eps and h must lie in (0,1)");
    const double a = cfg.alpha, d = cfg.delta;
    const double p = a / d;
    const double hda = std::pow(h, d / a);
    const double l = l_eval ? l_eval(h) : 0.0;
    RhoBounds r;
    r.rho1 = budget.K * std::pow(eps, 1.0 - 2.0 * p) * h +
             8.0 * budget.K * budget.K * budget.M_delta * std::pow(eps, 1.0 - p - d) * hda + l;
    r.rho2 = budget.K * (eps + hda) * std::pow(eps, -2.0 * p) * h +
             8.0 * budget.K * budget.K * budget.M_delta * (eps + hda) * std::pow(eps, -p - d) * hda +
             l;
    return r;
}

PowerFit fit_rate(const std::vector<std::pair<long, double>>& samples) {
    if (samples.size() < 4) throw DataError("fit_rate: need at least 4 samples");
    std::vector<double> lx, ly;
    for (const auto& [n, err] : samples) {
        if (!(err > 0.0)) throw DataError("fit_rate: errors must be positive");
        lx.push_back(-std::log(static_cast<double>(n)));  // log h
        ly.push_back(std::log(err));
    }
    LineFit lf = fit_line(lx, ly);
    PowerFit pf;
    pf.slope = lf.slope;
    pf.log_intercept = lf.intercept;
    pf.rms_log_residual = lf.rms_residual;
    pf.max_log_residual = lf.max_abs_residual;
    return pf;
}

ConsistencyModulus measure_consistency_modulus(const SublinearSpace& space,
                                               const StableConfig& cfg, const TestFunction& phi,
                                               const std::vector<double>& s_set,
                                               const std::vector<double>& x_samples,
                                               double tol) {
    if (s_set.size() < 4) throw UsageError("measure_consistency_modulus: need >= 4 values of s");
    ConsistencyModulus out;
    for (double s : s_set) {
        double worst = 0.0;
        for (double x : x_samples) {
            const Certified gen = sup_nonlocal(phi, x, space.uncertainty(), cfg, tol);
            const Certified shifted = expect_shifted(space, phi, x, s);
            const double lhs = std::abs(shifted.value - phi(x) - s * gen.value) / s;
            worst = std::max(worst, lhs);
        }
        out.s_values.push_back(s);
        out.modulus.push_back(worst);
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < out.s_values.size(); ++i) {
        if (out.modulus[i] > 1e-300) {
            lx.push_back(std::log(out.s_values[i]));
            ly.push_back(std::log(out.modulus[i]));
        }
    }
    if (lx.size() >= 2) {
        LineFit lf = fit_line(lx, ly);
        out.fitted_exponent = lf.slope;
        out.fitted_constant = std::exp(lf.intercept);
    }
    return out;
}

}  // namespace stablelab
