#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stablelab/common.hpp"
#include "stablelab/stable_measure.hpp"
#include "stablelab/sublinear.hpp"
#include "stablelab/test_function.hpp"
#include "stablelab/wk_family.hpp"

namespace stablelab {

/// Concrete constants feeding the error-bound evaluators.
struct ErrorBudget {
    double K = 0.0;        // max(C_phi^d (2||phi||)^{1-d} M_d, C_phi)
    double M_delta = 0.0;  // capped moment estimate
    double C_beta = 0.0;   // measured beta-term bound
    double C_phi = 0.0;
    double sup_phi = 0.0;
};

ErrorBudget make_error_budget(const TestFunction& phi, const StableConfig& cfg, double m_delta,
                              double c_beta);

/// The proven convergence exponent Gamma(alpha, delta, q0), three branches.
double gamma_rate(const StableConfig& cfg, double q0);

/// The example-family exponent Gamma(alpha, delta, beta), with the eps0
/// margin on the boundary branches.
double gamma_rate_example(const StableConfig& cfg, const TailCoefficients& tails, double eps0);

/// eps = h^gamma with gamma = gamma_rate(cfg, q0).
double epsilon_schedule(double h, const StableConfig& cfg, double q0);

/// Norm set of a C_b^2-ish test function used by the l_phi closed forms.
struct PhiNorms {
    double sup = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// The regime-matching consistency modulus closed form evaluated at s.
double l_phi_bound(const StableConfig& cfg, const PhiNorms& norms, double c_beta, double q0,
                   double s);

struct RhoBounds {
    double rho1 = 0.0;
    double rho2 = 0.0;
};

/// rho1(e,h) = K e^{1-2a/d} h + 8 K^2 M_d e^{1-a/d-d} h^{d/a} + l(h) and
/// rho2(e,h) = K(e+h^{d/a}) e^{-2a/d} h
///           + 8 K^2 M_d (e+h^{d/a}) e^{-a/d-d} h^{d/a} + l(h),
/// with l(h) supplied by the caller (the mollified function's modulus).
RhoBounds rho_bounds(double eps, double h, const StableConfig& cfg, const ErrorBudget& budget,
                     const std::function<double(double)>& l_eval);

struct PowerFit {
    double slope = 0.0;         // exponent of h
    double log_intercept = 0.0; // log of the constant
    double rms_log_residual = 0.0;
    double max_log_residual = 0.0;
};

/// Least-squares slope of log(error) against log(h) = -log(n).
PowerFit fit_rate(const std::vector<std::pair<long, double>>& samples);

/// Per-n rate-study row.
struct RateRow {
    long n = 0;
    double value = 0.0;
    double certificate = 0.0;
    double reference = 0.0;
    double error = 0.0;
};

struct RateReport {
    std::vector<RateRow> rows;
    double fitted_slope = 0.0;
    double fit_rms_log_residual = 0.0;
    double gamma_theoretical = 0.0;
    double epsilon_gamma = 0.0;  // exponent used by the eps = h^gamma schedule
    double reference_value = 0.0;
    double reference_certificate = 0.0;
    std::string reference_method;
    bool slope_applicable = true;
};

/// Measured consistency modulus: for each s the sup over sampled x of
/// (1/s)|E^[phi(x+s^{1/a}Z)] - phi(x) - s sup-nonlocal phi(x)|, with the
/// fitted decay exponent.
struct ConsistencyModulus {
    std::vector<double> s_values;
    std::vector<double> modulus;
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
};

ConsistencyModulus measure_consistency_modulus(const SublinearSpace& space,
                                               const StableConfig& cfg, const TestFunction& phi,
                                               const std::vector<double>& s_set,
                                               const std::vector<double>& x_samples,
                                               double tol = 1e-9);

}  // namespace stablelab
