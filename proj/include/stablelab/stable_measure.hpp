#pragma once

#include <array>
#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/test_function.hpp"

namespace stablelab {

enum class Regime { sub_one, critical_one, super_one };

/// Stability index, moment order and the alpha regime that selects the
/// compensator of the nonlocal operator.
struct StableConfig {
    double alpha;
    double delta;
    Regime regime;

    double inv_alpha() const { return 1.0 / alpha; }
};

/// Validates 0 < alpha < 2 and 0 < delta < alpha. For alpha in (1,2) the
/// moment order is always 1; passing anything else is an error.
StableConfig make_stable_config(double alpha, double delta);

/// make_stable_config with the conventional default moment order:
/// delta = 1 for alpha in (1,2), delta = alpha/2 otherwise.
StableConfig make_stable_config(double alpha);

/// Spectral corner weights k = (k1, k2) of a two-point alpha-stable measure.
struct CornerWeights {
    double k1;
    double k2;
};

/// The closed square [lambda_lower, lambda_upper]^2 of admissible corner
/// weights. The supremum of any functional affine in (k1, k2) over the
/// square is attained at one of the four corners.
struct UncertaintySet {
    double lambda_lower;
    double lambda_upper;

    std::array<CornerWeights, 4> corners() const {
        return {CornerWeights{lambda_lower, lambda_lower},
                CornerWeights{lambda_lower, lambda_upper},
                CornerWeights{lambda_upper, lambda_lower},
                CornerWeights{lambda_upper, lambda_upper}};
    }
    bool degenerate() const { return lambda_lower == lambda_upper; }
};

UncertaintySet make_uncertainty_set(double lambda_lower, double lambda_upper);

/// Density of the two-point alpha-stable Levy measure at lambda != 0:
/// k1/|l|^{1+a} on the negative axis, k2/l^{1+a} on the positive one.
double levy_density(const CornerWeights& k, double lambda, double alpha);

/// The compensated increment delta_lambda^alpha phi(x):
///   phi(x+l) - phi(x) - Dphi(x) l              for alpha in (1,2)
///   phi(x+l) - phi(x) - Dphi(x) l 1_{|l|<=1}   for alpha = 1
///   phi(x+l) - phi(x)                          for alpha in (0,1)
double compensated_increment(const TestFunction& phi, double x, double lambda,
                             const StableConfig& cfg);

/// Half-line integrals of the compensated increment against the unit-weight
/// kernel |l|^{-1-a}: value of the nonlocal operator decomposes as
/// k1*I_minus + k2*I_plus.
struct HalfLineIntegrals {
    Certified minus;
    Certified plus;
};

HalfLineIntegrals nonlocal_half_integrals(const TestFunction& phi, double x,
                                          const StableConfig& cfg, double tol);

/// Integral of the compensated increment against the full Levy measure with
/// corner weights k. Absolute error bound of the result is <= tol (else
/// AccuracyError carrying the achieved bound).
Certified nonlocal_apply(const TestFunction& phi, double x, const CornerWeights& k,
                         const StableConfig& cfg, double tol);

/// sup over the corner square of the nonlocal operator. The half-line
/// integrals are computed once; the supremum of the affine map
/// (k1,k2) -> k1 I- + k2 I+ is attained at the sign-matched corner.
Certified sup_nonlocal(const TestFunction& phi, double x, const UncertaintySet& U,
                       const StableConfig& cfg, double tol);

/// Validation-mode guard: brute-force scan of k1 I- + k2 I+ over an
/// n_per_side x n_per_side lattice in the square. Returns the lattice max,
/// which can never exceed the corner max by more than roundoff.
double corner_lattice_scan(const HalfLineIntegrals& I, const UncertaintySet& U,
                           int n_per_side = 21);

const char* regime_name(Regime r);

}  // namespace stablelab
