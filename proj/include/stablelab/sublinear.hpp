#pragma once

#include <functional>
#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/stable_measure.hpp"
#include "stablelab/test_function.hpp"
#include "stablelab/wk_family.hpp"

namespace stablelab {

/// The sublinear expectation E^[f] = sup_k int f dF_{W_k} over the corner
/// members of the uncertainty square. Member integrals are affine in
/// (k1,k2) (the inner-patch coefficients are affine in k), so corner
/// evaluation of the supremum is exact; a lattice scan is available as a
/// validation-mode guard.
///
/// For alpha <= 1 the family is symmetric (k1 = k2), so the members live on
/// the diagonal of the square and the supremum runs over its two ends.
class SublinearSpace {
  public:
    SublinearSpace(const StableConfig& cfg, const UncertaintySet& U, const TailCoefficients& tails,
                   double quad_tol);

    const StableConfig& config() const { return cfg_; }
    const UncertaintySet& uncertainty() const { return U_; }
    const TailCoefficients& tails() const { return tails_; }
    double quad_tol() const { return quad_tol_; }
    const std::vector<WkDistribution>& members() const { return members_; }

  private:
    StableConfig cfg_;
    UncertaintySet U_;
    TailCoefficients tails_;
    double quad_tol_;
    std::vector<WkDistribution> members_;
};

/// One classical member integral int f(shift + scale*W) dF_W in quantile
/// space. Endpoint slivers of u-mass tol/(8 sup) are exact when the window
/// says f is constant there, and otherwise certified by 2*sup per sliver.
Certified member_expectation(const WkDistribution& W, const TestFunction& f, double shift,
                             double scale, double tol);

/// E^[f]: supremum of the member integrals, certified to <= quad_tol.
Certified expect(const SublinearSpace& space, const TestFunction& f);

/// E^[f] for a raw bounded function with stated sup norm (no window data).
Certified expect_fn(const SublinearSpace& space, const std::function<double(double)>& f,
                    double sup_norm);

/// E^[f(x + s^{1/alpha} Z)].
Certified expect_shifted(const SublinearSpace& space, const TestFunction& f, double x, double s);

/// Per-member integral values (corner order), for corner-attainment tests.
std::vector<double> expect_member_values(const SublinearSpace& space, const TestFunction& f,
                                         double shift = 0.0, double scale = 1.0);

/// Validation-mode guard: sup over an n x n lattice of the k-square
/// (diagonal lattice for alpha <= 1), each member built and integrated
/// from scratch. Slow; certifies exactness of corner evaluation.
double expect_lattice_scan(const SublinearSpace& space, const TestFunction& f, int n_per_side = 21);

/// Capped delta-moment estimates of the normalized partial sums.
struct MomentEstimate {
    double delta = 0.0;
    double cap = 0.0;
    std::vector<long> n_values;
    std::vector<double> values;        // E^[min(|n^{-1/a} S_n|^delta, cap)]
    std::vector<double> values_cap10;  // same with cap/10 (cap sensitivity)
    double m_delta_lower = 0.0;        // running max of values: certified lower bound of M_delta
};

struct MomentRunParams {
    double grid_radius;
    double dx;
    double quad_tol;
};

MomentRunParams default_moment_params(const SublinearSpace& space, double rel_tail_tol = 1e-2);

/// E^[min(|n^{-1/a} S_n|^delta, cap)] for n = 1..n_max: n = 1 directly in
/// quantile space, n >= 2 through the scheme pushforward with
/// phi(x) = min(|x|^delta, cap) and h = 1/n, read at x = 0.
MomentEstimate moment_Mdelta(const SublinearSpace& space, int n_max, double cap,
                             const MomentRunParams& params);
MomentEstimate moment_Mdelta(const SublinearSpace& space, int n_max, double cap);

}  // namespace stablelab
