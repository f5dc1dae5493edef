#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/sublinear.hpp"
#include "stablelab/test_function.hpp"

namespace stablelab {

/// A bounded function sampled on a uniform spatial grid at one time label.
struct GridFunction {
    double x_min = 0.0;
    double x_max = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    double time_label = 0.0;
    double sup_norm_bound = 0.0;

    int size() const { return static_cast<int>(values.size()); }
    double x_at(int i) const { return x_min + i * dx; }
    int center_index() const { return (size() - 1) / 2; }

    /// Piecewise-linear interpolation, extended by the edge node values.
    double interp(double x) const;

    /// Max nodewise slope |u_{i+1}-u_i|/dx.
    double lipschitz_ratio() const;

    /// Adapter for the expectation machinery: the interpolant with its
    /// constant extension declared as a window.
    TestFunction as_test_function() const;

    void write_csv(std::ostream& os) const;
};

struct SchemeParams {
    int n = 8;                 // h = 1/n
    double grid_radius = 20.0; // grid spans [-R, R] (R is rounded to the mesh)
    double dx = 1e-2;
    double quad_tol = 1e-10;   // weight-table quadrature target per step
    double x_eval = 0.0;       // evaluation point the tail budget is anchored to
    bool nonmonotone_hook = false;  // test hook: deliberately overshooting interpolation

    double h() const { return 1.0 / static_cast<double>(n); }
};

/// One-step transition operator for a fixed (space, params) pair.
///
/// The step v(x_i) = E^[u~(x_i + h^{1/a} Z)] is a discrete correlation of
/// the node values with nonnegative hat-function weights
/// w_m = int hat_m d(law of h^{1/a} Z), one table per corner member, plus
/// exact closed-form masses for the constant extension beyond the table
/// range; the member supremum is a pointwise max. Weights are normalized to
/// total mass one so constants are preserved to roundoff, which is what
/// makes the step monotone and nonexpansive by construction.
class SchemeOperator {
  public:
    SchemeOperator(const SublinearSpace& space, const SchemeParams& params);
    ~SchemeOperator();
    SchemeOperator(const SchemeOperator&) = delete;
    SchemeOperator& operator=(const SchemeOperator&) = delete;

    GridFunction init(const TestFunction& phi) const;
    GridFunction step(const GridFunction& u) const;

    double h() const;
    int grid_size() const;
    /// Achieved weight-table quadrature error (summed |dw|), max over members.
    double step_quad_err() const;
    /// max member P(|Z| > (R - |x_eval|)/h^{1/a}).
    double step_tail_mass() const;
    /// FFT roundoff allowance per step (scaled by the sup bound at use site).
    double fft_roundoff() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct RunResult {
    GridFunction grid;
    double center_value = 0.0;
    double tail_budget = 0.0;
    double interp_term = 0.0;
    double quad_term = 0.0;
    double certificate = 0.0;  // tail_budget + interp_term + quad_term
    std::vector<GridFunction> trajectory;  // filled when requested
};

/// Applies the step n times from u(0,.) = phi. The certificate is the
/// machine-checkable bound tail_budget + n * modulus_phi(dx) + n * quad.
RunResult run_scheme(const TestFunction& phi, const SublinearSpace& space,
                     const SchemeParams& params, bool keep_trajectory = false);

struct RegularityReport {
    double max_spatial_ratio = 0.0;
    double spatial_bound = 0.0;
    double spatial_margin = 0.0;  // bound - ratio (>= 0 passes)
    bool spatial_ok = false;
    double worst_time_gap = 0.0;  // max over pairs of (|du| - bound); <= 0 passes
    bool time_ok = false;
};

/// Space regularity against C_phi and time regularity against the
/// delta-moment bound K~ (|t-s|^{d/a} + h^{d/a}) with the capped moment
/// estimate standing in for M_delta.
RegularityReport regularity_audit(const std::vector<GridFunction>& trajectory,
                                  const TestFunction& phi, double m_delta_capped,
                                  const StableConfig& cfg, double h, double spatial_slack = 1e-4);

struct ComparisonResult {
    bool pass = false;
    double worst_margin = 0.0;  // most negative slack-adjusted margin observed
    double slack = 0.0;
};

/// Evolves two trajectories whose one-step residuals are h1 and h2 and
/// checks the discrete comparison inequality
///   u - v <= sup (u0 - v0)^+ + t sup (h1 - h2)^+
/// nodewise at every step, within the accumulated certified slack.
ComparisonResult comparison_check(const GridFunction& u0, const GridFunction& v0,
                                  const std::function<double(double, double)>& h1,
                                  const std::function<double(double, double)>& h2,
                                  const SublinearSpace& space, const SchemeParams& params);

}  // namespace stablelab
