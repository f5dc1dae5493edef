#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stablelab/experiment.hpp"

using namespace stablelab;

TEST_CASE("config json round trip and validation") {
    ExperimentConfig c = preset_super_one();
    ExperimentConfig back = parse_config_json(config_to_json(c));
    CHECK(back.alpha == c.alpha);
    CHECK(back.beta == c.beta);
    CHECK(back.n_list == c.n_list);

    // beta <= alpha is a usage error.
    ExperimentConfig bad = c;
    bad.beta = 1.2;
    CHECK_THROWS_AS(parse_config_json(config_to_json(bad)), UsageError);

    // a1 != a2 at alpha = 0.5 violates (D1).
    ExperimentConfig bad2 = preset_sub_one();
    bad2.a1 = 0.01;
    CHECK_THROWS_AS(parse_config_json(config_to_json(bad2)), UsageError);

    CHECK_THROWS_AS(parse_config_json("{not json"), UsageError);
}

TEST_CASE("axiom sweep passes at the stated slack") {
    ExperimentConfig c = preset_super_one();
    c.quad_tol = 1e-6;
    SublinearSpace space = c.make_space();
    AxiomSweep sweep = run_axiom_sweep(space, 40, 99, 3.0 * c.quad_tol);
    CHECK(sweep.ok);
}

TEST_CASE("scheme property sweep passes") {
    ExperimentConfig c = preset_super_one();
    SchemePropertySweep s = run_scheme_property_sweep(c);
    CHECK(s.ok);
}

TEST_CASE("comparison sweep passes and the negative control fails") {
    ExperimentConfig c = preset_super_one();
    c.audit_trials = 8;
    ComparisonSweep ok = run_comparison_sweep(c);
    CHECK(ok.ok);
    CHECK(ok.worst_margin >= 0.0);

    c.negative_control = true;
    ComparisonSweep bad = run_comparison_sweep(c);
    CHECK_FALSE(bad.ok);
}

TEST_CASE("mollifier sweep passes") {
    MollifierSweep s = run_mollifier_sweep({0.2, 0.1}, 1.5);
    CHECK(s.ok);
}

TEST_CASE("validation outcome on the super-one preset") {
    ExperimentConfig c = preset_super_one();
    std::vector<long> ns{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    ValidationOutcome v = run_validation(c, ns);
    CHECK(v.pass);
    CHECK(std::abs(v.q0_empirical - 0.2) <= 0.05);
}

TEST_CASE("rate report serialization has the fixed column order") {
    RateReport rep;
    rep.rows.push_back({8, 0.5, 1e-3, 0.55, 0.05});
    std::ostringstream os;
    write_rate_report_csv(rep, os);
    CHECK(os.str().rfind("n,value,certificate,reference,error\n", 0) == 0);
}

TEST_CASE("rate table prints the closed-form grid") {
    std::ostringstream os;
    CHECK(cmd_rate_table(os) == 0);
    CHECK(os.str().find("alpha,delta,beta,q0,gamma,gamma_example") == 0);
    CHECK(os.str().find("1.5") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns") {
    ExperimentConfig c = preset_super_one();
    c.n_list = {4, 8, 16, 32};
    c.grid_radius = 20.0;
    c.dx = 5e-3;
    RateReport r1 = run_rate_study(c);
    RateReport r2 = run_rate_study(c);
    std::ostringstream a, b;
    write_rate_report_csv(r1, a);
    write_rate_report_csv(r2, b);
    CHECK(a.str() == b.str());
    CHECK(rate_report_json(r1, c) == rate_report_json(r2, c));
}
