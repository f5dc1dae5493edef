#pragma once

#include <string>
#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/stable_measure.hpp"

namespace stablelab {

/// Tail perturbation coefficients of the example family:
/// F(x) = [k1/a + a1 |x|^{a-b}] |x|^{-a} on x <= -1 and
/// F(x) = 1 - [k2/a + a2 x^{a-b}] x^{-a} on x >= 1, with b > a.
struct TailCoefficients {
    double a1;
    double a2;
    double beta;
};

/// One member of the distribution family: explicit power tails glued to a
/// quadratic density on [-1,1]. The inner coefficients solve the linear
/// system {total mass, continuity of the density at x=1, and mean zero
/// (alpha>1) or evenness (alpha<=1)}; they are affine in (k1,k2), which is
/// what makes corner evaluation of the k-supremum exact.
class WkDistribution {
  public:
    WkDistribution(const StableConfig& cfg, const CornerWeights& k, const TailCoefficients& tails);

    double cdf(double x) const;
    double pdf(double x) const;
    /// Inverse of the cdf. Exact tails are inverted by safeguarded Newton,
    /// the inner cubic likewise. quantile(0) = -inf, quantile(1) = +inf.
    double quantile(double u) const;

    /// beta_2(x) = (1 - F(x)) x^a - k2/a for x >= 0.
    double beta2(double x) const;
    /// beta_1(x) = F(x) |x|^a - k1/a for x <= 0.
    double beta1(double x) const;

    /// Exact mean (alpha > 1 only; the tails are not integrable otherwise).
    double mean() const;
    /// P(|W| > T) for T >= 1, in closed form.
    double two_sided_tail_mass(double T) const;

    const StableConfig& config() const { return cfg_; }
    const CornerWeights& corner() const { return k_; }
    const TailCoefficients& tails() const { return tails_; }
    double cdf_at_minus_one() const { return F_m1_; }
    double cdf_at_plus_one() const { return F_p1_; }
    /// Inner density coefficients p(x) = c0 + c1 x + c2 x^2.
    double inner_c0() const { return c0_; }
    double inner_c1() const { return c1_; }
    double inner_c2() const { return c2_; }

  private:
    StableConfig cfg_;
    CornerWeights k_;
    TailCoefficients tails_;
    double c0_ = 0.0, c1_ = 0.0, c2_ = 0.0;
    double F_m1_ = 0.0, F_p1_ = 0.0;

    double inner_cdf(double x) const;  // valid on [-1,1]
};

/// Builds the Example family member, validating feasibility. Throws
/// ConstructionError naming the violated constraint when no nonnegative
/// inner density exists, and DomainError for parameter-domain violations.
WkDistribution make_example_distribution(const StableConfig& cfg, const CornerWeights& k,
                                         const TailCoefficients& tails);

/// One tabulated decay condition: the per-n value of every term the alpha
/// regime requires in (C2)/(D2)/(E2), the fitted envelope decay, and the
/// pass flag (every value <= C_beta_empirical * n^{-q0_empirical}).
struct ConditionReport {
    Regime regime;
    std::vector<std::string> term_names;
    std::vector<long> n_values;
    std::vector<std::vector<double>> term_values;  // [term][n index]
    std::vector<double> envelope;                  // per-n max over terms
    double q0_empirical = 0.0;
    double c_beta_empirical = 0.0;
    bool pass = false;
    std::string failure_reason;
};

ConditionReport validate_conditions(const WkDistribution& W, const std::vector<long>& n_set,
                                    double quad_tol = 1e-10);

/// The uniform bound C_beta of the s-independent beta-terms used by the
/// consistency bounds: max(|beta2(1)|, |beta1(-1)|, the inner weighted
/// integrals of |a b(l) -+ b'(l) l|). Measured by quadrature.
double measure_c_beta(const WkDistribution& W, double quad_tol = 1e-10);

/// The tail-decay exponent q0 of the example family, per regime, with the
/// eps0 margin applied on the boundary branches (beta = 2 for alpha in
/// {1} u (1,2), beta = 1 for alpha in (0,1)).
double q0_theoretical(const StableConfig& cfg, const TailCoefficients& tails, double eps0);

}  // namespace stablelab
