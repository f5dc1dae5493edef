#include "stablelab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stablelab/quadrature.hpp"
#include "stablelab/reference.hpp"

namespace stablelab {

using nlohmann::json;

StableConfig ExperimentConfig::stable_config() const {
    const double d = delta.value_or(alpha > 1.0 ? 1.0 : 0.5 * alpha);
    return make_stable_config(alpha, d);
}

UncertaintySet ExperimentConfig::uncertainty() const {
    return make_uncertainty_set(lambda_lower, lambda_upper);
}

TailCoefficients ExperimentConfig::tail_coefficients() const { return {a1, a2, beta}; }

TestFunction ExperimentConfig::phi() const { return named_test_function(phi_name); }

SublinearSpace ExperimentConfig::make_space() const {
    return SublinearSpace(stable_config(), uncertainty(), tail_coefficients(), quad_tol);
}

namespace {

void require(bool cond, const std::string& field, const std::string& what) {
    if (!cond) throw UsageError("config field '" + field + "': " + what);
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("alpha", c.alpha);
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    get("lambda_lower", c.lambda_lower);
    get("lambda_upper", c.lambda_upper);
    get("a1", c.a1);
    get("a2", c.a2);
    get("beta", c.beta);
    get("phi", c.phi_name);
    get("n_list", c.n_list);
    get("quad_tol", c.quad_tol);
    get("grid_radius", c.grid_radius);
    get("dx", c.dx);
    get("cap", c.cap);
    get("eps0", c.eps0);
    get("moment_n_max", c.moment_n_max);
    get("audit_trials", c.audit_trials);
    get("audit_n", c.audit_n);
    get("seed", c.seed);
    get("threads", c.threads);
    get("negative_control", c.negative_control);

    require(c.alpha > 0.0 && c.alpha < 2.0, "alpha", "must lie in (0,2)");
    if (c.delta) {
        require(*c.delta > 0.0 && *c.delta < c.alpha, "delta", "must lie in (0,alpha)");
        if (c.alpha > 1.0) require(*c.delta == 1.0, "delta", "is fixed to 1 for alpha in (1,2)");
    }
    require(c.lambda_lower > 0.0 && c.lambda_upper >= c.lambda_lower, "lambda_lower/lambda_upper",
            "need 0 < lower <= upper");
    require(c.beta > c.alpha, "beta", "must exceed alpha");
    require(c.a1 >= 0.0 && c.a2 >= 0.0, "a1/a2", "must be nonnegative");
    if (c.alpha <= 1.0)
        require(c.a1 == c.a2, "a1/a2", "symmetry condition (D1)/(E1) requires a1 = a2");
    require(!c.n_list.empty(), "n_list", "must not be empty");
    for (long n : c.n_list) require(n >= 1, "n_list", "entries must be >= 1");
    require(c.quad_tol > 0.0, "quad_tol", "must be positive");
    require(c.grid_radius > 0.0 && c.dx > 0.0, "grid_radius/dx", "must be positive");
    require(c.cap > 0.0, "cap", "must be positive");
    require(c.eps0 > 0.0, "eps0", "must be positive");
    require(c.threads >= 1, "threads", "must be >= 1");
    // Fail fast on family infeasibility (for every corner the space uses).
    c.make_space();
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    if (c.delta) j["delta"] = *c.delta;
    j["lambda_lower"] = c.lambda_lower;
    j["lambda_upper"] = c.lambda_upper;
    j["a1"] = c.a1;
    j["a2"] = c.a2;
    j["beta"] = c.beta;
    j["phi"] = c.phi_name;
    j["n_list"] = c.n_list;
    j["quad_tol"] = c.quad_tol;
    j["grid_radius"] = c.grid_radius;
    j["dx"] = c.dx;
    j["cap"] = c.cap;
    j["eps0"] = c.eps0;
    j["moment_n_max"] = c.moment_n_max;
    j["audit_trials"] = c.audit_trials;
    j["audit_n"] = c.audit_n;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["negative_control"] = c.negative_control;
    return j.dump(2);
}

ExperimentConfig preset_super_one() {
    ExperimentConfig c;
    c.alpha = 1.5;
    c.delta = 1.0;
    c.lambda_lower = 0.26;
    c.lambda_upper = 0.29;
    c.a1 = c.a2 = 0.02;
    c.beta = 1.8;
    c.phi_name = "cos-window";
    c.n_list = {8, 16, 32, 64, 128};
    c.grid_radius = 60.0;
    c.dx = 1e-3;
    return c;
}

ExperimentConfig preset_sub_one() {
    ExperimentConfig c;
    c.alpha = 0.5;
    c.delta = 0.25;
    c.lambda_lower = 0.08;
    c.lambda_upper = 0.12;
    c.a1 = c.a2 = 0.02;
    c.beta = 2.0;
    c.phi_name = "cos-window";
    c.n_list = {8, 16, 32, 64, 128};
    c.grid_radius = 10000.0;
    c.dx = 1e-2;
    return c;
}

ExperimentConfig preset_critical_one() {
    ExperimentConfig c;
    c.alpha = 1.0;
    c.delta = 0.5;
    c.lambda_lower = 0.2;
    c.lambda_upper = 0.3;
    c.a1 = c.a2 = 0.05;
    c.beta = 2.5;
    c.phi_name = "cos-window";
    c.n_list = {8, 16, 32, 64};
    c.grid_radius = 400.0;
    c.dx = 2e-3;
    return c;
}

ExperimentConfig preset_degenerate(double alpha) {
    ExperimentConfig c;
    if (alpha > 1.0) {
        c = preset_super_one();
        c.lambda_lower = c.lambda_upper = 0.25;
        c.beta = 2.2;
        c.grid_radius = 100.0;
        c.dx = 1e-3;
    } else {
        c = preset_sub_one();
        c.lambda_lower = c.lambda_upper = 0.1;
        c.beta = 2.0;
        c.grid_radius = 5000.0;
        c.dx = 1e-2;
    }
    c.alpha = alpha;
    if (alpha > 1.0) c.delta = 1.0; else c.delta = 0.5 * alpha;
    c.n_list = {32, 64, 128, 256};
    return c;
}

SchemeParams scheme_params_for(const ExperimentConfig& cfg, long n) {
    SchemeParams p;
    p.n = static_cast<int>(n);
    p.grid_radius = cfg.grid_radius;
    p.dx = cfg.dx;
    p.quad_tol = std::min(cfg.quad_tol, 1e-9);
    p.nonmonotone_hook = cfg.negative_control;
    return p;
}

RateReport run_rate_study(const ExperimentConfig& cfg) {
    SublinearSpace space = cfg.make_space();
    TestFunction phi = cfg.phi();
    std::vector<long> ns = cfg.n_list;
    std::sort(ns.begin(), ns.end());

    std::vector<LevelValue> levels(ns.size());
    auto run_one = [&](size_t i) {
        RunResult r = run_scheme(phi, space, scheme_params_for(cfg, ns[i]));
        levels[i] = LevelValue{ns[i], r.center_value, r.certificate};
    };
    if (cfg.threads > 1) {
        std::vector<std::future<void>> futs;
        size_t next = 0;
        while (next < ns.size()) {
            futs.clear();
            for (int t = 0; t < cfg.threads && next < ns.size(); ++t, ++next)
                futs.push_back(std::async(std::launch::async, run_one, next));
            for (auto& f : futs) f.get();
        }
    } else {
        for (size_t i = 0; i < ns.size(); ++i) run_one(i);
    }

    RateReport rep;
    const StableConfig sc = cfg.stable_config();
    rep.gamma_theoretical = gamma_rate_example(sc, cfg.tail_coefficients(), cfg.eps0);
    rep.epsilon_gamma = gamma_rate(sc, q0_theoretical(sc, cfg.tail_coefficients(), cfg.eps0));

    const UncertaintySet U = cfg.uncertainty();
    ReferenceValue ref;
    if (U.degenerate() && phi.window) {
        ref = fourier_oracle(phi, 1.0, sc.alpha, U.lambda_lower, 0.0, 1e-7);
        rep.reference_method = "fourier_oracle";
    } else {
        ref = extrapolated_reference(levels);
        rep.reference_method = "extrapolated";
    }
    rep.reference_value = ref.value;
    rep.reference_certificate = ref.certified_error;

    std::vector<std::pair<long, double>> samples;
    bool all_positive = true;
    for (const LevelValue& lv : levels) {
        RateRow row;
        row.n = lv.n;
        row.value = lv.value;
        row.certificate = lv.certificate;
        row.reference = ref.value;
        row.error = std::abs(lv.value - ref.value);
        rep.rows.push_back(row);
        if (row.error < 1e-14) all_positive = false;
        samples.push_back({lv.n, row.error});
    }
    if (all_positive && samples.size() >= 4) {
        PowerFit fit = fit_rate(samples);
        rep.fitted_slope = fit.slope;
        rep.fit_rms_log_residual = fit.rms_log_residual;
        rep.slope_applicable = true;
    } else {
        rep.slope_applicable = false;
    }
    return rep;
}

ValidationOutcome run_validation(const ExperimentConfig& cfg, const std::vector<long>& n_set) {
    SublinearSpace space = cfg.make_space();
    ValidationOutcome out;
    out.q0_theory = q0_theoretical(cfg.stable_config(), cfg.tail_coefficients(), cfg.eps0);
    std::vector<double> envelope(n_set.size(), 0.0);
    out.pass = true;
    for (const WkDistribution& W : space.members()) {
        ConditionReport rep = validate_conditions(W, n_set);
        out.pass = out.pass && rep.pass;
        for (size_t i = 0; i < rep.envelope.size(); ++i)
            envelope[i] = std::max(envelope[i], rep.envelope[i]);
        out.member_reports.push_back(std::move(rep));
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < n_set.size(); ++i) {
        if (envelope[i] > 1e-300) {
            lx.push_back(std::log(static_cast<double>(n_set[i])));
            ly.push_back(std::log(envelope[i]));
        }
    }
    if (lx.size() >= 2) {
        LineFit fit = fit_line(lx, ly);
        out.q0_empirical = -fit.slope;
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < lx.size(); ++i)
            worst = std::max(worst, ly[i] + out.q0_empirical * lx[i]);
        out.c_beta_empirical = std::exp(worst);
    }
    return out;
}

namespace {

// Random windowed test function: a sum of hats. Bounded by the coefficient
// sum, exactly zero outside the hat supports.
TestFunction random_hat_sum(std::mt19937_64& rng, bool nonnegative = false) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), center(-6.0, 6.0), width(0.5, 3.0);
    TestFunction t;
    t.name = "random-hat-sum";
    struct Hat {
        double a, c, s;
    };
    std::vector<Hat> hats;
    double sup = 0.0, lo = 0.0, hi = 0.0;
    for (int j = 0; j < 6; ++j) {
        Hat h{amp(rng), center(rng), width(rng)};
        if (nonnegative) h.a = std::abs(h.a);
        hats.push_back(h);
        sup += std::abs(h.a);
        lo = std::min(lo, h.c - h.s);
        hi = std::max(hi, h.c + h.s);
    }
    t.f = [hats](double x) {
        double v = 0.0;
        for (const auto& h : hats) v += h.a * std::max(0.0, 1.0 - std::abs((x - h.c) / h.s));
        return v;
    };
    t.sup_norm = sup;
    double lips = 0.0;
    for (const auto& h : hats) lips += std::abs(h.a) / h.s;
    t.lipschitz = lips;
    t.window = Window{lo, hi, 0.0, 0.0};
    return t;
}

TestFunction combine(const TestFunction& f, const TestFunction& g, double cf, double cg) {
    TestFunction t;
    t.name = "combined";
    auto ff = f.f, gf = g.f;
    t.f = [ff, gf, cf, cg](double x) { return cf * ff(x) + cg * gf(x); };
    t.sup_norm = std::abs(cf) * f.sup_norm + std::abs(cg) * g.sup_norm;
    t.lipschitz = std::abs(cf) * f.lipschitz + std::abs(cg) * g.lipschitz;
    if (f.window && g.window) {
        t.window = Window{std::min(f.window->lo, g.window->lo), std::max(f.window->hi, g.window->hi),
                          cf * f.window->value_left + cg * g.window->value_left,
                          cf * f.window->value_right + cg * g.window->value_right};
    }
    return t;
}

}  // namespace

AxiomSweep run_axiom_sweep(const SublinearSpace& space, int count, unsigned long seed,
                           double slack) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> cdist(-2.0, 2.0), ldist(0.1, 3.0);
    AxiomSweep sweep;
    sweep.functions = count;
    for (int i = 0; i < count; ++i) {
        TestFunction f = random_hat_sum(rng);
        TestFunction g = random_hat_sum(rng);
        TestFunction bump = random_hat_sum(rng, /*nonnegative=*/true);

        const double ef = expect(space, f).value;
        const double eg = expect(space, g).value;

        // Monotonicity: f <= f + bump.
        const double emono = expect(space, combine(f, bump, 1.0, 1.0)).value;
        sweep.worst_monotonicity = std::max(sweep.worst_monotonicity, ef - emono);

        // Constant preservation.
        const double c = cdist(rng);
        const double ec = expect(space, constant_fn(c)).value;
        sweep.worst_constant = std::max(sweep.worst_constant, std::abs(ec - c));

        // Subadditivity.
        const double esum = expect(space, combine(f, g, 1.0, 1.0)).value;
        sweep.worst_subadditivity = std::max(sweep.worst_subadditivity, esum - ef - eg);

        // Positive homogeneity.
        const double lam = ldist(rng);
        const double escaled = expect(space, combine(f, f, lam, 0.0)).value;
        sweep.worst_homogeneity = std::max(sweep.worst_homogeneity, std::abs(escaled - lam * ef));
    }
    sweep.ok = sweep.worst_monotonicity <= slack && sweep.worst_constant <= slack &&
               sweep.worst_subadditivity <= slack && sweep.worst_homogeneity <= slack;
    return sweep;
}

SchemePropertySweep run_scheme_property_sweep(const ExperimentConfig& cfg) {
    ExperimentConfig small = cfg;
    small.grid_radius = std::min(cfg.grid_radius, 20.0);
    small.dx = std::max(cfg.dx, 2.0 * small.grid_radius / 8000.0);
    SublinearSpace space = small.make_space();
    SchemeParams params = scheme_params_for(small, small.audit_n);
    SchemeOperator op(space, params);

    TestFunction phi = small.phi();
    GridFunction u = op.init(phi);
    GridFunction v = u;
    GridFunction w = u;
    for (int i = 0; i < u.size(); ++i) {
        const double x = u.x_at(i);
        v.values[i] += 0.3 * std::max(0.0, 1.0 - std::abs(x / 3.0));  // u <= v
        w.values[i] += 0.2 * std::cos(3.0 * x) * std::max(0.0, 1.0 - std::abs(x / 5.0));
    }
    v.sup_norm_bound += 0.3;
    w.sup_norm_bound += 0.2;

    auto sup_of = [](const GridFunction& g) {
        double m = 0.0;
        for (double x : g.values) m = std::max(m, std::abs(x));
        return m;
    };

    GridFunction su = op.step(u), sv = op.step(v), sw = op.step(w);
    SchemePropertySweep r;
    r.worst_sup_growth = sup_of(su) - sup_of(u);
    for (int i = 0; i < u.size(); ++i)
        r.worst_monotonicity = std::max(r.worst_monotonicity, su.values[i] - sv.values[i]);
    double duw = 0.0, dsuw = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        duw = std::max(duw, std::abs(u.values[i] - w.values[i]));
        dsuw = std::max(dsuw, std::abs(su.values[i] - sw.values[i]));
    }
    r.worst_contraction = dsuw - duw;
    r.worst_lipschitz_growth = su.lipschitz_ratio() - u.lipschitz_ratio();
    const double slack = 1e-8;
    r.ok = r.worst_sup_growth <= slack && r.worst_monotonicity <= slack &&
           r.worst_contraction <= slack && r.worst_lipschitz_growth <= slack;
    return r;
}

ComparisonSweep run_comparison_sweep(const ExperimentConfig& cfg) {
    ExperimentConfig small = cfg;
    small.grid_radius = std::min(cfg.grid_radius, 15.0);
    small.dx = std::max(cfg.dx, 2.0 * small.grid_radius / 4000.0);
    SublinearSpace space = small.make_space();
    SchemeParams params = scheme_params_for(small, small.audit_n);
    SchemeOperator op(space, params);
    TestFunction phi = small.phi();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComparisonSweep sweep;
    sweep.trials = cfg.audit_trials;
    sweep.worst_margin = std::numeric_limits<double>::infinity();
    sweep.ok = true;
    for (int trial = 0; trial < cfg.audit_trials; ++trial) {
        GridFunction u0 = op.init(phi);
        GridFunction v0 = u0;
        const double shift = 0.4 * dist(rng);
        for (int i = 0; i < v0.size(); ++i)
            v0.values[i] += shift * std::max(0.0, 1.0 - std::abs(v0.x_at(i) / 4.0));
        v0.sup_norm_bound += std::abs(shift);
        const double a1 = dist(rng), b1 = 2.0 * dist(rng), a2 = dist(rng), b2 = 2.0 * dist(rng);
        auto h1 = [a1, b1](double t, double x) { return a1 * std::cos(b1 * x + t); };
        auto h2 = [a2, b2](double t, double x) { return a2 * std::sin(b2 * x - t); };
        ComparisonResult res = comparison_check(u0, v0, h1, h2, space, params);
        sweep.worst_margin = std::min(sweep.worst_margin, res.worst_margin);
        sweep.ok = sweep.ok && res.pass;
    }
    return sweep;
}

MollifierSweep run_mollifier_sweep(const std::vector<double>& eps_values, double p) {
    MollifierSweep sweep;
    sweep.kernel_unit_integral_err = std::abs(
        integrate_adaptive(
            [](double tau) {
                return integrate_adaptive(
                           [tau](double e) { return mollifier_kernel::value(tau, e); }, -1.0, 1.0,
                           1e-12)
                    .value;
            },
            -1.0, 0.0, 1e-11)
            .value -
        1.0);

    const double ip = 1.0 / p;
    std::vector<HolderLipschitzFn> samples;
    samples.push_back({[ip](double t, double x) { return 0.8 * (std::min(std::abs(x), 3.0) + std::pow(t, ip)); },
                       0.8, 0.8 * (3.0 + 1.0), std::nullopt});
    samples.push_back({[ip](double t, double x) { return std::sin(x) + 0.5 * std::pow(std::abs(t - 0.4), ip); },
                       1.0, 1.0 + 0.5, std::nullopt});
    samples.push_back({[ip](double t, double x) { return std::max(0.0, 1.0 - std::abs(x)) - 0.7 * std::pow(t, ip); },
                       1.0, 1.7, std::nullopt});
    samples.push_back({[](double t, double x) { return 0.5 * std::cos(2.0 * x) + 0.3 * t; },
                       1.0, 0.8, std::nullopt});
    samples.push_back({[ip](double t, double x) { return std::clamp(x, -2.0, 2.0) * (1.0 - 0.2 * std::pow(t, ip)); },
                       1.4, 2.0, std::nullopt});

    for (double eps : eps_values) {
        MollifierParams mp{eps, p, 32};
        for (const HolderLipschitzFn& s : samples) {
            MollifiedFn m = mollify(s, mp);
            const double C = s.holder_lipschitz_const;
            double gap = 0.0, d1 = 0.0;
            for (int it = 0; it <= 10; ++it) {
                const double t = it / 10.0;
                for (int ix = -40; ix <= 40; ++ix) {
                    const double x = ix * 0.125;
                    gap = std::max(gap, std::abs(s.eval(t, x) - m.value(t, x)));
                    d1 = std::max(d1, std::abs(m.derivative(0, 1, t, x)));
                }
            }
            sweep.worst_gap_ratio = std::max(sweep.worst_gap_ratio, gap / (2.0 * C * eps));
            sweep.worst_deriv_ratio = std::max(sweep.worst_deriv_ratio, d1 / (2.0 * C));
        }
    }
    sweep.ok = sweep.worst_gap_ratio <= 1.0 && sweep.worst_deriv_ratio <= 1.0 &&
               sweep.kernel_unit_integral_err <= 1e-10;
    return sweep;
}

bool AuditOutcome::all_ok() const {
    return axioms.ok && scheme_props.ok && comparison.ok && mollifier.ok &&
           regularity.spatial_ok && regularity.time_ok;
}

AuditOutcome run_audit(const ExperimentConfig& cfg) {
    AuditOutcome out;
    SublinearSpace space = cfg.make_space();
    out.axioms = run_axiom_sweep(space, 200, cfg.seed, 3.0 * cfg.quad_tol);
    out.scheme_props = run_scheme_property_sweep(cfg);
    out.comparison = run_comparison_sweep(cfg);

    const StableConfig sc = cfg.stable_config();
    out.mollifier = run_mollifier_sweep({0.2, 0.1, 0.05}, sc.alpha / sc.delta);

    // Regularity of a short trajectory against the delta-moment bound.
    ExperimentConfig small = cfg;
    small.grid_radius = std::min(cfg.grid_radius, 30.0);
    small.dx = std::max(cfg.dx, 2.0 * small.grid_radius / 20000.0);
    TestFunction phi = small.phi();
    const double cap_audit =
        std::pow(2.0 * phi.sup_norm / std::max(phi.lipschitz, 1e-12), sc.delta);
    MomentEstimate mom = moment_Mdelta(space, std::min(cfg.moment_n_max, 8), cap_audit);
    double tail_allow = 0.0;
    MomentRunParams mrp = default_moment_params(space);
    for (const WkDistribution& W : space.members())
        tail_allow = std::max(tail_allow,
                              std::min(1.0, 4.0 * W.two_sided_tail_mass(
                                                std::max(1.0, 0.5 * mrp.grid_radius))));
    RunResult traj = run_scheme(phi, space, scheme_params_for(small, cfg.audit_n), true);
    out.regularity = regularity_audit(traj.trajectory, phi, mom.m_delta_lower + cap_audit * tail_allow,
                                      sc, 1.0 / cfg.audit_n);
    return out;
}

void write_rate_report_csv(const RateReport& rep, std::ostream& os) {
    os << "n,value,certificate,reference,error\n";
    char buf[192];
    for (const RateRow& r : rep.rows) {
        std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g\n", r.n, r.value,
                      r.certificate, r.reference, r.error);
        os << buf;
    }
}

std::string rate_report_json(const RateReport& rep, const ExperimentConfig& cfg) {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["reference"] = {{"value", rep.reference_value},
                      {"certificate", rep.reference_certificate},
                      {"method", rep.reference_method}};
    j["gamma_theoretical"] = rep.gamma_theoretical;
    j["epsilon_gamma"] = rep.epsilon_gamma;
    j["fitted_slope"] = rep.fitted_slope;
    j["fit_rms_log_residual"] = rep.fit_rms_log_residual;
    j["slope_applicable"] = rep.slope_applicable;
    json rows = json::array();
    for (const RateRow& r : rep.rows) {
        rows.push_back({{"n", r.n},
                        {"value", r.value},
                        {"certificate", r.certificate},
                        {"reference", r.reference},
                        {"error", r.error}});
    }
    j["rows"] = rows;
    return j.dump(2);
}

void write_condition_report_csv(const ConditionReport& rep, std::ostream& os) {
    os << "n";
    for (const std::string& t : rep.term_names) os << "," << t;
    os << ",envelope\n";
    for (size_t i = 0; i < rep.n_values.size(); ++i) {
        os << rep.n_values[i];
        char buf[64];
        for (size_t t = 0; t < rep.term_values.size(); ++t) {
            std::snprintf(buf, sizeof(buf), ",%.17g", rep.term_values[t][i]);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g\n", rep.envelope[i]);
        os << buf;
    }
}

std::string validation_json(const ValidationOutcome& v, const ExperimentConfig& cfg) {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["q0_empirical"] = v.q0_empirical;
    j["c_beta_empirical"] = v.c_beta_empirical;
    j["q0_theoretical"] = v.q0_theory;
    j["pass"] = v.pass;
    json members = json::array();
    for (const ConditionReport& rep : v.member_reports) {
        json m;
        m["regime"] = regime_name(rep.regime);
        m["q0_empirical"] = rep.q0_empirical;
        m["c_beta_empirical"] = rep.c_beta_empirical;
        m["pass"] = rep.pass;
        if (!rep.failure_reason.empty()) m["failure_reason"] = rep.failure_reason;
        members.push_back(m);
    }
    j["members"] = members;
    return j.dump(2);
}

std::string audit_json(const AuditOutcome& a, const ExperimentConfig& cfg) {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["axioms"] = {{"functions", a.axioms.functions},
                   {"worst_monotonicity", a.axioms.worst_monotonicity},
                   {"worst_constant", a.axioms.worst_constant},
                   {"worst_subadditivity", a.axioms.worst_subadditivity},
                   {"worst_homogeneity", a.axioms.worst_homogeneity},
                   {"ok", a.axioms.ok}};
    j["scheme"] = {{"worst_sup_growth", a.scheme_props.worst_sup_growth},
                   {"worst_monotonicity", a.scheme_props.worst_monotonicity},
                   {"worst_contraction", a.scheme_props.worst_contraction},
                   {"worst_lipschitz_growth", a.scheme_props.worst_lipschitz_growth},
                   {"ok", a.scheme_props.ok}};
    j["comparison"] = {{"trials", a.comparison.trials},
                       {"worst_margin", a.comparison.worst_margin},
                       {"ok", a.comparison.ok}};
    j["mollifier"] = {{"worst_gap_ratio", a.mollifier.worst_gap_ratio},
                      {"worst_deriv_ratio", a.mollifier.worst_deriv_ratio},
                      {"kernel_unit_integral_err", a.mollifier.kernel_unit_integral_err},
                      {"ok", a.mollifier.ok}};
    j["regularity"] = {{"max_spatial_ratio", a.regularity.max_spatial_ratio},
                       {"spatial_bound", a.regularity.spatial_bound},
                       {"spatial_ok", a.regularity.spatial_ok},
                       {"worst_time_gap", a.regularity.worst_time_gap},
                       {"time_ok", a.regularity.time_ok}};
    j["all_ok"] = a.all_ok();
    return j.dump(2);
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

void write_run_metadata(const std::string& out_dir) {
    json j;
    j["timestamp_unix"] = static_cast<long>(::time(nullptr));
    write_file(out_dir + "/run_metadata.json", j.dump(2));
}

}  // namespace

int cmd_validate(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::vector<long> n_set;
    for (int p = 0; p <= 10; ++p) n_set.push_back(1L << p);
    ValidationOutcome v = run_validation(cfg, n_set);
    for (size_t m = 0; m < v.member_reports.size(); ++m) {
        std::ofstream csv(out_dir + "/conditions_member" + std::to_string(m) + ".csv");
        write_condition_report_csv(v.member_reports[m], csv);
    }
    write_file(out_dir + "/conditions.json", validation_json(v, cfg));
    write_run_metadata(out_dir);
    return v.pass ? 0 : 2;
}

int cmd_converge(const ExperimentConfig& cfg, const std::string& out_dir) {
    RateReport rep = run_rate_study(cfg);
    std::ofstream csv(out_dir + "/rate_report.csv");
    write_rate_report_csv(rep, csv);
    write_file(out_dir + "/rate_report.json", rate_report_json(rep, cfg));
    write_run_metadata(out_dir);
    return 0;
}

int cmd_audit(const ExperimentConfig& cfg, const std::string& out_dir) {
    AuditOutcome a = run_audit(cfg);
    write_file(out_dir + "/audit_report.json", audit_json(a, cfg));
    write_run_metadata(out_dir);
    return a.all_ok() ? 0 : 3;
}

int cmd_rate_table(std::ostream& os) {
    os << "alpha,delta,beta,q0,gamma,gamma_example\n";
    const double alphas[] = {0.3, 0.5, 0.7, 0.9, 1.0, 1.2, 1.5, 1.8};
    const double betas[] = {1.2, 1.5, 1.8, 2.2, 2.5, 3.0};
    char buf[160];
    for (double a : alphas) {
        StableConfig sc = make_stable_config(a);
        for (double b : betas) {
            if (b <= a) continue;
            TailCoefficients tails{0.02, 0.02, b};
            const double q0 = q0_theoretical(sc, tails, 0.01);
            std::snprintf(buf, sizeof(buf), "%g,%g,%g,%.12g,%.12g,%.12g\n", a, sc.delta, b, q0,
                          gamma_rate(sc, q0), gamma_rate_example(sc, tails, 0.01));
            os << buf;
        }
    }
    return 0;
}

}  // namespace stablelab
