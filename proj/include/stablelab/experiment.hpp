#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stablelab/rates.hpp"
#include "stablelab/scheme.hpp"
#include "stablelab/sublinear.hpp"

namespace stablelab {

/// One experiment: family parameters, test function, scheme resolution and
/// driver knobs. Parsed from JSON; every numeric range is validated against
/// the module preconditions before any computation starts.
struct ExperimentConfig {
    double alpha = 1.5;
    std::optional<double> delta;  // default: 1 above one, alpha/2 at or below
    double lambda_lower = 0.26;
    double lambda_upper = 0.29;
    double a1 = 0.02;
    double a2 = 0.02;
    double beta = 1.8;
    std::string phi_name = "cos-window";
    std::vector<long> n_list = {8, 16, 32, 64, 128};
    double quad_tol = 1e-8;
    double grid_radius = 60.0;
    double dx = 1e-3;
    double cap = 1e6;
    double eps0 = 0.01;
    int moment_n_max = 12;
    int audit_trials = 100;
    int audit_n = 8;
    unsigned long seed = 12345;
    int threads = 1;
    bool negative_control = false;

    StableConfig stable_config() const;
    UncertaintySet uncertainty() const;
    TailCoefficients tail_coefficients() const;
    TestFunction phi() const;
    SublinearSpace make_space() const;
};

ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

// Tuned presets for the example family (also used by the acceptance suite).
ExperimentConfig preset_super_one();              // alpha = 1.5, beta = 1.8
ExperimentConfig preset_sub_one();                // alpha = 0.5, beta = 2, delta = 0.25
ExperimentConfig preset_critical_one();           // alpha = 1, beta = 2.5
ExperimentConfig preset_degenerate(double alpha); // singleton symmetric uncertainty

/// Scheme parameters for one refinement level of a config.
SchemeParams scheme_params_for(const ExperimentConfig& cfg, long n);

/// Full convergence study: scheme per n, extrapolated reference from the
/// three finest levels, Fourier oracle when the uncertainty degenerates to
/// a symmetric singleton (it then serves as the reference).
RateReport run_rate_study(const ExperimentConfig& cfg);

/// Condition tables for every corner member plus the combined envelope fit.
struct ValidationOutcome {
    std::vector<ConditionReport> member_reports;
    double q0_empirical = 0.0;
    double c_beta_empirical = 0.0;
    double q0_theory = 0.0;
    bool pass = false;
};

ValidationOutcome run_validation(const ExperimentConfig& cfg, const std::vector<long>& n_set);

/// Sublinear-axiom sweep over seeded random windowed test functions.
struct AxiomSweep {
    int functions = 0;
    double worst_monotonicity = 0.0;   // positive = violation beyond slack
    double worst_constant = 0.0;
    double worst_subadditivity = 0.0;
    double worst_homogeneity = 0.0;
    bool ok = false;
};

AxiomSweep run_axiom_sweep(const SublinearSpace& space, int count, unsigned long seed,
                           double slack);

struct SchemePropertySweep {
    double worst_sup_growth = 0.0;      // ||step u|| - ||u||
    double worst_monotonicity = 0.0;    // max violation of nodewise order
    double worst_contraction = 0.0;     // ||step u - step v|| - ||u - v||
    double worst_lipschitz_growth = 0.0;
    bool ok = false;
};

SchemePropertySweep run_scheme_property_sweep(const ExperimentConfig& cfg);

struct ComparisonSweep {
    int trials = 0;
    double worst_margin = 0.0;
    bool ok = false;
};

ComparisonSweep run_comparison_sweep(const ExperimentConfig& cfg);

struct MollifierSweep {
    double worst_gap_ratio = 0.0;    // ||v - v^eps|| / (2 C eps), <= 1 passes
    double worst_deriv_ratio = 0.0;  // ||Dx v^eps|| / (2 C), <= 1 passes
    double kernel_unit_integral_err = 0.0;
    bool ok = false;
};

MollifierSweep run_mollifier_sweep(const std::vector<double>& eps_values, double p);

struct AuditOutcome {
    AxiomSweep axioms;
    SchemePropertySweep scheme_props;
    ComparisonSweep comparison;
    MollifierSweep mollifier;
    RegularityReport regularity;
    bool all_ok() const;
};

AuditOutcome run_audit(const ExperimentConfig& cfg);

// Report files. CSV columns are fixed: n,value,certificate,reference,error.
void write_rate_report_csv(const RateReport& rep, std::ostream& os);
std::string rate_report_json(const RateReport& rep, const ExperimentConfig& cfg);
void write_condition_report_csv(const ConditionReport& rep, std::ostream& os);
std::string validation_json(const ValidationOutcome& v, const ExperimentConfig& cfg);
std::string audit_json(const AuditOutcome& a, const ExperimentConfig& cfg);

// CLI entry points. Exit codes: 0 pass, 1 usage, 2 numerical failure,
// 3 audit failure.
int cmd_validate(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_converge(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_audit(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_rate_table(std::ostream& os);

}  // namespace stablelab
