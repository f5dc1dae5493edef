#include "stablelab/wk_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stablelab/quadrature.hpp"

namespace stablelab {

namespace {

constexpr double kFeasibilityTol = 1e-12;

// Safeguarded Newton for a monotone increasing g on [lo,hi] with g(lo)<=target<=g(hi).
double solve_monotone(const std::function<double(double)>& g,
                      const std::function<double(double)>& gprime, double target, double lo,
                      double hi, double x0) {
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double gx = g(x) - target;
        if (gx > 0.0)
            hi = x;
        else
            lo = x;
        const double dg = gprime(x);
        double step = dg != 0.0 ? gx / dg : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-16 * std::max(1.0, std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

}  // namespace

WkDistribution::WkDistribution(const StableConfig& cfg, const CornerWeights& k,
                               const TailCoefficients& tails)
    : cfg_(cfg), k_(k), tails_(tails) {
    const double a = cfg.alpha, b = tails.beta;
    if (!(b > a)) throw DomainError("tail exponent beta must exceed alpha");
    if (tails.a1 < 0.0 || tails.a2 < 0.0) throw DomainError("tail coefficients must be nonnegative");
    if (!(k.k1 > 0.0 && k.k2 > 0.0)) throw DomainError("corner weights must be positive");
    if (cfg.regime != Regime::super_one) {
        if (k.k1 != k.k2)
            throw ConstructionError("symmetric law requires k1 = k2 for alpha <= 1", "(D1)/(E1)");
        if (tails.a1 != tails.a2)
            throw ConstructionError("symmetric law requires a1 = a2 for alpha <= 1", "(D1)/(E1)");
    }

    F_m1_ = k.k1 / a + tails.a1;
    F_p1_ = 1.0 - k.k2 / a - tails.a2;
    const double mass = F_p1_ - F_m1_;
    if (mass < -kFeasibilityTol)
        throw ConstructionError("inner mass is negative: tails already exceed total probability",
                                "total-mass");

    // Density value forced at x = 1 by continuity with the upper tail.
    const double q = k.k2 + tails.a2 * b;
    if (cfg.regime == Regime::super_one) {
        const double tail_mean = (k.k2 - k.k1) / (a - 1.0) + (tails.a2 - tails.a1) * b / (b - 1.0);
        c1_ = 1.5 * (-tail_mean);
    } else {
        c1_ = 0.0;
    }
    c0_ = (3.0 * mass - 2.0 * (q - c1_)) / 4.0;
    c2_ = q - c1_ - c0_;

    // Nonnegativity of the quadratic on [-1,1].
    double pmin = std::min(c0_ - c1_ + c2_, c0_ + c1_ + c2_);
    if (c2_ > 0.0) {
        const double xv = -c1_ / (2.0 * c2_);
        if (xv > -1.0 && xv < 1.0) pmin = std::min(pmin, c0_ - c1_ * c1_ / (4.0 * c2_));
    }
    if (pmin < -kFeasibilityTol) {
        throw ConstructionError(
            cfg.regime == Regime::super_one
                ? "no nonnegative quadratic inner density meets mass + mean-zero + continuity"
                : "no nonnegative quadratic inner density meets mass + symmetry + continuity",
            cfg.regime == Regime::super_one ? "mean-zero/inner-nonnegativity"
                                            : "inner-nonnegativity");
    }
}

double WkDistribution::inner_cdf(double x) const {
    return F_m1_ + c0_ * (x + 1.0) + 0.5 * c1_ * (x * x - 1.0) + c2_ * (x * x * x + 1.0) / 3.0;
}

double WkDistribution::cdf(double x) const {
    const double a = cfg_.alpha, b = tails_.beta;
    if (x <= -1.0) {
        const double ax = -x;
        return k_.k1 / a * std::pow(ax, -a) + tails_.a1 * std::pow(ax, -b);
    }
    if (x >= 1.0) {
        return 1.0 - k_.k2 / a * std::pow(x, -a) - tails_.a2 * std::pow(x, -b);
    }
    return inner_cdf(x);
}

double WkDistribution::pdf(double x) const {
    const double a = cfg_.alpha, b = tails_.beta;
    if (x < -1.0) {
        const double ax = -x;
        return k_.k1 * std::pow(ax, -1.0 - a) + tails_.a1 * b * std::pow(ax, -1.0 - b);
    }
    if (x > 1.0) {
        return k_.k2 * std::pow(x, -1.0 - a) + tails_.a2 * b * std::pow(x, -1.0 - b);
    }
    return c0_ + c1_ * x + c2_ * x * x;
}

double WkDistribution::quantile(double u) const {
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    const double a = cfg_.alpha, b = tails_.beta;
    if (u <= F_m1_) {
        // Lower tail: (k1/a) t^a + a1 t^b = u with t = 1/|x| in (0,1].
        const double k1 = k_.k1, a1 = tails_.a1;
        if (a1 == 0.0) return -std::pow(u * a / k1, -1.0 / a);
        auto g = [&](double t) { return k1 / a * std::pow(t, a) + a1 * std::pow(t, b); };
        auto gp = [&](double t) { return k1 * std::pow(t, a - 1.0) + a1 * b * std::pow(t, b - 1.0); };
        const double t0 = std::min(1.0, std::pow(u * a / k1, 1.0 / a));
        const double t = solve_monotone(g, gp, u, 0.0, 1.0, t0);
        return -1.0 / t;
    }
    if (u >= F_p1_) {
        const double k2 = k_.k2, a2 = tails_.a2, v = 1.0 - u;
        if (a2 == 0.0) return std::pow(v * a / k2, -1.0 / a);
        auto g = [&](double t) { return k2 / a * std::pow(t, a) + a2 * std::pow(t, b); };
        auto gp = [&](double t) { return k2 * std::pow(t, a - 1.0) + a2 * b * std::pow(t, b - 1.0); };
        const double t0 = std::min(1.0, std::pow(v * a / k2, 1.0 / a));
        const double t = solve_monotone(g, gp, v, 0.0, 1.0, t0);
        return 1.0 / t;
    }
    auto g = [&](double x) { return inner_cdf(x); };
    auto gp = [&](double x) { return std::max(0.0, c0_ + c1_ * x + c2_ * x * x); };
    const double span = std::max(F_p1_ - F_m1_, 1e-300);
    const double x0 = -1.0 + 2.0 * (u - F_m1_) / span;
    return solve_monotone(g, gp, u, -1.0, 1.0, x0);
}

double WkDistribution::beta2(double x) const {
    if (x < 0.0) throw DomainError("beta2 is defined on x >= 0");
    return (1.0 - cdf(x)) * std::pow(x, cfg_.alpha) - k_.k2 / cfg_.alpha;
}

double WkDistribution::beta1(double x) const {
    if (x > 0.0) throw DomainError("beta1 is defined on x <= 0");
    return cdf(x) * std::pow(-x, cfg_.alpha) - k_.k1 / cfg_.alpha;
}

double WkDistribution::mean() const {
    if (cfg_.regime != Regime::super_one)
        throw CapabilityError("mean exists only for alpha in (1,2)");
    const double a = cfg_.alpha, b = tails_.beta;
    const double tail_mean = (k_.k2 - k_.k1) / (a - 1.0) + (tails_.a2 - tails_.a1) * b / (b - 1.0);
    return tail_mean + (2.0 / 3.0) * c1_;
}

double WkDistribution::two_sided_tail_mass(double T) const {
    if (T < 1.0) throw DomainError("two_sided_tail_mass requires T >= 1");
    const double a = cfg_.alpha, b = tails_.beta;
    return (k_.k1 + k_.k2) / a * std::pow(T, -a) + (tails_.a1 + tails_.a2) * std::pow(T, -b);
}

WkDistribution make_example_distribution(const StableConfig& cfg, const CornerWeights& k,
                                         const TailCoefficients& tails) {
    return WkDistribution(cfg, k, tails);
}

namespace {

// int_0^1 |g(y)| y^w dy with w in (-1, 0], via the substitution
// y = z^{1/(1+w)} that flattens the weight to a constant.
Certified inner_weighted_integral(const std::function<double(double)>& g, double w,
                                  double extra_break, double tol) {
    const double p = 1.0 + w;
    auto integrand = [&](double z) { return std::abs(g(std::pow(z, 1.0 / p))) / p; };
    std::vector<double> breaks{0.0, 1.0};
    if (extra_break > 0.0 && extra_break < 1.0) breaks.push_back(std::pow(extra_break, p));
    return integrate_adaptive_pieces(integrand, breaks, tol);
}

// int_1^inf |beta(s y)| y^w dy where beta(z) = coef * z^{alpha-beta} exactly
// for z >= 1 (true whenever s >= 1). Quadrature on [1, Ystar] against the
// distribution's own beta evaluator, exact power tail beyond.
Certified tail_weighted_integral(const std::function<double(double)>& beta_abs, double s,
                                 double coef, double alpha, double beta, double w, double tol) {
    const double ystar = 50.0;
    auto integrand = [&](double y) { return beta_abs(s * y) * std::pow(y, w); };
    Certified quad = integrate_adaptive(integrand, 1.0, ystar, tol);
    const double p = alpha - beta + w;  // < -1
    const double tail = coef * std::pow(s, alpha - beta) * std::pow(ystar, p + 1.0) / (-p - 1.0);
    return {quad.value + tail, quad.error_bound};
}

}  // namespace

ConditionReport validate_conditions(const WkDistribution& W, const std::vector<long>& n_set,
                                    double quad_tol) {
    if (n_set.empty()) throw UsageError("validate_conditions: n_set must not be empty");
    const StableConfig& cfg = W.config();
    const TailCoefficients& tails = W.tails();
    const double a = cfg.alpha, b = tails.beta, d = cfg.delta;

    ConditionReport rep;
    rep.regime = cfg.regime;
    rep.n_values.assign(n_set.begin(), n_set.end());

    auto b2 = [&](double z) { return std::abs(W.beta2(z)); };
    auto b1m = [&](double z) { return std::abs(W.beta1(-z)); };  // evaluated at -z <= 0

    struct Term {
        std::string name;
        std::function<double(double)> eval;  // of s = n^{1/alpha}
    };
    std::vector<Term> terms;

    switch (cfg.regime) {
        case Regime::super_one:
            terms.push_back({"abs_beta1_at_-n^(1/a)", [&](double s) { return b1m(s); }});
            terms.push_back({"int_tail_beta1_x^-a", [&](double s) {
                                 return tail_weighted_integral(b1m, s, tails.a1, a, b, -a, quad_tol).value;
                             }});
            terms.push_back({"int_inner_beta1_x^(1-a)", [&](double s) {
                                 return inner_weighted_integral([&](double y) { return b1m(s * y); },
                                                                1.0 - a, 1.0 / s, quad_tol)
                                     .value;
                             }});
            terms.push_back({"abs_beta2_at_n^(1/a)", [&](double s) { return b2(s); }});
            terms.push_back({"int_tail_beta2_x^-a", [&](double s) {
                                 return tail_weighted_integral(b2, s, tails.a2, a, b, -a, quad_tol).value;
                             }});
            terms.push_back({"int_inner_beta2_x^(1-a)", [&](double s) {
                                 return inner_weighted_integral([&](double y) { return b2(s * y); },
                                                                1.0 - a, 1.0 / s, quad_tol)
                                     .value;
                             }});
            break;
        case Regime::sub_one:
            terms.push_back({"abs_beta2_at_n^(1/a)", [&](double s) { return b2(s); }});
            terms.push_back({"int_tail_beta2_x^(d-1-a)", [&](double s) {
                                 return tail_weighted_integral(b2, s, tails.a2, a, b, d - 1.0 - a, quad_tol)
                                     .value;
                             }});
            terms.push_back({"int_inner_beta2_x^-a", [&](double s) {
                                 return inner_weighted_integral([&](double y) { return b2(s * y); }, -a,
                                                                1.0 / s, quad_tol)
                                     .value;
                             }});
            break;
        case Regime::critical_one:
            terms.push_back({"abs_beta2_at_n", [&](double s) { return b2(s); }});
            terms.push_back({"int_tail_beta2_x^(d-2)", [&](double s) {
                                 return tail_weighted_integral(b2, s, tails.a2, a, b, d - 2.0, quad_tol)
                                     .value;
                             }});
            terms.push_back({"int_inner_beta2", [&](double s) {
                                 return inner_weighted_integral([&](double y) { return b2(s * y); }, 0.0,
                                                                1.0 / s, quad_tol)
                                     .value;
                             }});
            break;
    }

    rep.term_values.assign(terms.size(), {});
    for (size_t t = 0; t < terms.size(); ++t) rep.term_names.push_back(terms[t].name);

    for (long n : n_set) {
        const double s = std::pow(static_cast<double>(n), 1.0 / a);
        double env = 0.0;
        for (size_t t = 0; t < terms.size(); ++t) {
            double v;
            try {
                v = terms[t].eval(s);
            } catch (const AccuracyError&) {
                rep.pass = false;
                rep.failure_reason = "divergent or unresolvable integral: " + terms[t].name;
                return rep;
            }
            rep.term_values[t].push_back(v);
            env = std::max(env, v);
        }
        rep.envelope.push_back(env);
    }

    // Envelope fit log(value) ~ -q0 log(n); C_beta from the worst residual
    // so that every tabulated value satisfies the bound.
    std::vector<double> lx, ly;
    for (size_t i = 0; i < rep.envelope.size(); ++i) {
        if (rep.envelope[i] > 1e-300 && rep.n_values[i] > 0) {
            lx.push_back(std::log(static_cast<double>(rep.n_values[i])));
            ly.push_back(std::log(rep.envelope[i]));
        }
    }
    if (lx.size() >= 2) {
        LineFit fit = fit_line(lx, ly);
        rep.q0_empirical = -fit.slope;
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < lx.size(); ++i) worst = std::max(worst, ly[i] + rep.q0_empirical * lx[i]);
        rep.c_beta_empirical = std::exp(worst);
    } else {
        rep.q0_empirical = 0.0;
        rep.c_beta_empirical = lx.empty() ? 0.0 : std::exp(ly[0]);
    }
    rep.pass = true;
    for (size_t i = 0; i < rep.envelope.size(); ++i) {
        const double bound =
            rep.c_beta_empirical * std::pow(static_cast<double>(rep.n_values[i]), -rep.q0_empirical);
        if (rep.envelope[i] > bound * (1.0 + 1e-9) + 1e-300) {
            rep.pass = false;
            rep.failure_reason = "tabulated value exceeds fitted envelope";
        }
    }
    return rep;
}

double measure_c_beta(const WkDistribution& W, double quad_tol) {
    const StableConfig& cfg = W.config();
    const double a = cfg.alpha;
    double w;
    switch (cfg.regime) {
        case Regime::super_one: w = 1.0 - a; break;
        case Regime::sub_one: w = -a; break;
        default: w = 0.0; break;
    }
    // |a b2(l) - l b2'(l)| = |f(l) l^{1+a} - k2| and the mirrored analogue.
    auto upper = [&](double l) { return W.pdf(l) * std::pow(l, 1.0 + a) - W.corner().k2; };
    auto lower = [&](double l) { return W.pdf(-l) * std::pow(l, 1.0 + a) - W.corner().k1; };
    double c = std::max(std::abs(W.beta2(1.0)), std::abs(W.beta1(-1.0)));
    c = std::max(c, inner_weighted_integral(upper, w, 0.5, quad_tol).value);
    c = std::max(c, inner_weighted_integral(lower, w, 0.5, quad_tol).value);
    return c;
}

double q0_theoretical(const StableConfig& cfg, const TailCoefficients& tails, double eps0) {
    const double a = cfg.alpha, b = tails.beta;
    if (!(b > a)) throw DomainError("q0_theoretical: beta must exceed alpha");
    switch (cfg.regime) {
        case Regime::super_one:
            if (b == 2.0) return (2.0 - a) / a - eps0;
            return std::min((b - a) / a, (2.0 - a) / a);
        case Regime::sub_one:
            if (b == 1.0) return (1.0 - a) / a - eps0;
            return std::min((b - a) / a, (1.0 - a) / a);
        case Regime::critical_one:
            if (b == 2.0) return 1.0 - eps0;
            return std::min(b - 1.0, 1.0);
    }
    return 0.0;
}

}  // namespace stablelab
