#include "stablelab/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stablelab/quadrature.hpp"
#include "stablelab/scheme.hpp"

namespace stablelab {

SublinearSpace::SublinearSpace(const StableConfig& cfg, const UncertaintySet& U,
                               const TailCoefficients& tails, double quad_tol)
    : cfg_(cfg), U_(U), tails_(tails), quad_tol_(quad_tol) {
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be positive");
    if (cfg.regime == Regime::super_one) {
        for (const CornerWeights& k : U.corners()) {
            members_.emplace_back(cfg, k, tails);
            if (U.degenerate()) break;
        }
    } else {
        members_.emplace_back(cfg, CornerWeights{U.lambda_lower, U.lambda_lower}, tails);
        if (!U.degenerate())
            members_.emplace_back(cfg, CornerWeights{U.lambda_upper, U.lambda_upper}, tails);
    }
}

Certified member_expectation(const WkDistribution& W, const TestFunction& f, double shift,
                             double scale, double tol) {
    if (!std::isfinite(f.sup_norm))
        throw ContractViolation("expect: test function must be bounded with a finite sup norm");
    const double sup = std::max(f.sup_norm, 1e-300);
    const double ueps = std::min(0.125, tol / (8.0 * sup));
    auto g = [&](double u) { return f(shift + scale * W.quantile(u)); };

    Certified core = integrate_adaptive(g, ueps, 1.0 - ueps, 0.5 * tol, 400000);

    // Endpoint slivers. Exact when the window certifies constancy there.
    Certified out = core;
    const double qlo = shift + scale * W.quantile(ueps);
    const double qhi = shift + scale * W.quantile(1.0 - ueps);
    if (f.window && qlo <= f.window->lo) {
        out.value += f.window->value_left * ueps;
    } else {
        out.value += g(0.5 * ueps) * ueps;
        out.error_bound += 2.0 * sup * ueps;
    }
    if (f.window && qhi >= f.window->hi) {
        out.value += f.window->value_right * ueps;
    } else {
        out.value += g(1.0 - 0.5 * ueps) * ueps;
        out.error_bound += 2.0 * sup * ueps;
    }
    return out;
}

namespace {

Certified sup_over_members(const SublinearSpace& space, const TestFunction& f, double shift,
                           double scale) {
    double best = -std::numeric_limits<double>::infinity();
    double bound = 0.0;
    for (const WkDistribution& W : space.members()) {
        Certified v = member_expectation(W, f, shift, scale, space.quad_tol());
        if (v.value > best) {
            best = v.value;
            bound = v.error_bound;
        }
    }
    return {best, bound};
}

}  // namespace

Certified expect(const SublinearSpace& space, const TestFunction& f) {
    return sup_over_members(space, f, 0.0, 1.0);
}

Certified expect_fn(const SublinearSpace& space, const std::function<double(double)>& f,
                    double sup_norm) {
    TestFunction t;
    t.name = "raw";
    t.f = f;
    t.sup_norm = sup_norm;
    t.lipschitz = std::numeric_limits<double>::infinity();
    return expect(space, t);
}

Certified expect_shifted(const SublinearSpace& space, const TestFunction& f, double x, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("expect_shifted: s must lie in (0,1]");
    return sup_over_members(space, f, x, std::pow(s, space.config().inv_alpha()));
}

std::vector<double> expect_member_values(const SublinearSpace& space, const TestFunction& f,
                                         double shift, double scale) {
    std::vector<double> out;
    for (const WkDistribution& W : space.members())
        out.push_back(member_expectation(W, f, shift, scale, space.quad_tol()).value);
    return out;
}

double expect_lattice_scan(const SublinearSpace& space, const TestFunction& f, int n_per_side) {
    const StableConfig& cfg = space.config();
    const UncertaintySet& U = space.uncertainty();
    const double lo = U.lambda_lower, hi = U.lambda_upper;
    double best = -std::numeric_limits<double>::infinity();
    auto val_at = [&](double k1, double k2) {
        WkDistribution W(cfg, CornerWeights{k1, k2}, space.tails());
        return member_expectation(W, f, 0.0, 1.0, space.quad_tol()).value;
    };
    if (U.degenerate()) return val_at(lo, lo);
    if (cfg.regime == Regime::super_one) {
        for (int i = 0; i < n_per_side; ++i)
            for (int j = 0; j < n_per_side; ++j) {
                const double k1 = lo + (hi - lo) * i / (n_per_side - 1.0);
                const double k2 = lo + (hi - lo) * j / (n_per_side - 1.0);
                best = std::max(best, val_at(k1, k2));
            }
    } else {
        for (int i = 0; i < n_per_side; ++i) {
            const double c = lo + (hi - lo) * i / (n_per_side - 1.0);
            best = std::max(best, val_at(c, c));
        }
    }
    return best;
}

MomentRunParams default_moment_params(const SublinearSpace& space, double rel_tail_tol) {
    const StableConfig& cfg = space.config();
    double ks = 0.0;
    for (const WkDistribution& W : space.members())
        ks = std::max(ks, W.corner().k1 + W.corner().k2);
    // Grid radius so that the two-sided tail mass beyond R stays below the
    // requested share of the capped moment scale.
    const double coef = 2.0 * ks / cfg.alpha;
    const double R = std::pow(std::max(4.0 * coef / rel_tail_tol, 16.0), 1.0 / cfg.alpha);
    return MomentRunParams{std::min(R, 5e4), 0.25, 1e-9};
}

MomentEstimate moment_Mdelta(const SublinearSpace& space, int n_max, double cap,
                             const MomentRunParams& params) {
    if (!(cap > 0.0)) throw DomainError("moment_Mdelta: cap must be positive");
    const StableConfig& cfg = space.config();
    MomentEstimate est;
    est.delta = cfg.delta;
    est.cap = cap;

    for (int n = 1; n <= n_max; ++n) {
        double v, v10;
        if (n == 1) {
            v = expect(space, capped_abs_power(cfg.delta, cap)).value;
            v10 = expect(space, capped_abs_power(cfg.delta, cap / 10.0)).value;
        } else {
            SchemeParams sp;
            sp.n = n;
            sp.grid_radius = params.grid_radius;
            sp.dx = params.dx;
            sp.quad_tol = params.quad_tol;
            v = run_scheme(capped_abs_power(cfg.delta, cap), space, sp).center_value;
            v10 = run_scheme(capped_abs_power(cfg.delta, cap / 10.0), space, sp).center_value;
        }
        est.n_values.push_back(n);
        est.values.push_back(v);
        est.values_cap10.push_back(v10);
        est.m_delta_lower = std::max(est.m_delta_lower, v);
    }
    return est;
}

MomentEstimate moment_Mdelta(const SublinearSpace& space, int n_max, double cap) {
    return moment_Mdelta(space, n_max, cap, default_moment_params(space));
}

}  // namespace stablelab
