#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nested_oracle.hpp"
#include "stablelab/scheme.hpp"

using namespace stablelab;

namespace {

SublinearSpace space_super(double tol = 1e-9) {
    return SublinearSpace(make_stable_config(1.5), make_uncertainty_set(0.26, 0.29),
                          {0.02, 0.02, 1.8}, tol);
}

SchemeParams desk_params(int n) {
    SchemeParams p;
    p.n = n;
    p.grid_radius = 40.0;
    p.dx = 2e-3;
    p.quad_tol = 1e-10;
    return p;
}

}  // namespace

TEST_CASE("init samples the test function exactly") {
    SublinearSpace sp = space_super();
    SchemeOperator op(sp, desk_params(8));
    GridFunction g = op.init(hat_function());
    CHECK(g.values[g.center_index()] == doctest::Approx(1.0));
    CHECK(g.interp(0.35) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(g.sup_norm_bound == doctest::Approx(1.0));
    GridFunction c = op.init(constant_fn(3.0));
    for (double v : c.values) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("step preserves constants to roundoff") {
    SublinearSpace sp = space_super();
    SchemeOperator op(sp, desk_params(8));
    GridFunction u = op.init(constant_fn(2.5));
    GridFunction v = op.step(u);
    for (int i = 0; i < v.size(); i += 997) CHECK(v.values[i] == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(v.time_label == doctest::Approx(0.125));
}

TEST_CASE("step is monotone and nonexpansive") {
    SublinearSpace sp = space_super();
    SchemeOperator op(sp, desk_params(8));
    GridFunction u = op.init(cos_window(4.0, 8.0));
    GridFunction w = u;
    for (int i = 0; i < w.size(); ++i)
        w.values[i] += 0.25 * std::max(0.0, 1.0 - std::abs(w.x_at(i) / 2.0));
    GridFunction su = op.step(u), sw = op.step(w);
    double worst = -1e300;
    for (int i = 0; i < su.size(); ++i) worst = std::max(worst, su.values[i] - sw.values[i]);
    CHECK(worst <= 1e-12);

    // Contraction.
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < su.size(); ++i) {
        d0 = std::max(d0, std::abs(u.values[i] - w.values[i]));
        d1 = std::max(d1, std::abs(su.values[i] - sw.values[i]));
    }
    CHECK(d1 <= d0 + 1e-12);

    // Lipschitz does not grow.
    CHECK(su.lipschitz_ratio() <= u.lipschitz_ratio() * (1.0 + 1e-10) + 1e-12);

    // Sup norm stability.
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < su.size(); ++i) {
        m0 = std::max(m0, std::abs(u.values[i]));
        m1 = std::max(m1, std::abs(su.values[i]));
    }
    CHECK(m1 <= m0 + 1e-12);
}

TEST_CASE("a single step matches expect_shifted on the interpolant") {
    SublinearSpace sp = space_super();
    SchemeParams params = desk_params(8);
    SchemeOperator op(sp, params);
    GridFunction u = op.init(cos_window(4.0, 8.0));
    GridFunction v = op.step(u);
    TestFunction interp = u.as_test_function();
    for (double x : {0.0, 0.5, -1.2}) {
        const double direct = expect_shifted(sp, interp, x, params.h()).value;
        CHECK(v.interp(x) == doctest::Approx(direct).epsilon(5e-8));
    }
}

TEST_CASE("run: constants pass through and n=1 reduces to one expectation") {
    SublinearSpace sp = space_super();
    RunResult rc = run_scheme(constant_fn(1.25), sp, desk_params(8));
    CHECK(rc.center_value == doctest::Approx(1.25).epsilon(1e-13));

    TestFunction phi = cos_window(4.0, 8.0);
    RunResult r1 = run_scheme(phi, sp, desk_params(1));
    Certified direct = expect(sp, phi);
    CHECK(std::abs(r1.center_value - direct.value) <= r1.certificate + direct.error_bound);
}

TEST_CASE("run matches the nested-quadrature oracle for k <= 3") {
    SublinearSpace sp = space_super();
    TestFunction phi = cos_window(4.0, 8.0);
    SchemeParams params;
    params.n = 8;
    params.grid_radius = 60.0;
    params.dx = 1e-3;
    params.quad_tol = 1e-10;

    testing::NestedOracle oracle(sp, params.h());
    SchemeOperator op(sp, params);
    GridFunction u = op.init(phi);
    double tail_budget = 0.0;
    for (int k = 1; k <= 3; ++k) {
        u = op.step(u);
        tail_budget += 2.0 * phi.sup_norm * op.step_tail_mass();
        const double cert = tail_budget + k * phi.modulus_bound(params.dx) +
                            k * (op.step_quad_err() + op.fft_roundoff());
        const double ora = oracle.value(phi, k, 0.0);
        CHECK(std::abs(u.values[u.center_index()] - ora) <= cert + 1e-5);
        CHECK(cert <= 1e-2);
    }
}

TEST_CASE("deterministic: identical inputs give identical outputs") {
    SublinearSpace sp = space_super();
    RunResult a = run_scheme(cos_window(4.0, 8.0), sp, desk_params(4));
    RunResult b = run_scheme(cos_window(4.0, 8.0), sp, desk_params(4));
    CHECK(a.center_value == b.center_value);
    for (int i = 0; i < a.grid.size(); i += 1009) CHECK(a.grid.values[i] == b.grid.values[i]);
}

TEST_CASE("stepping past t = 1 is a sequencing error") {
    SublinearSpace sp = space_super();
    SchemeParams p = desk_params(2);
    SchemeOperator op(sp, p);
    GridFunction u = op.init(hat_function());
    u = op.step(u);
    u = op.step(u);
    CHECK_THROWS_AS(op.step(u), SequencingError);
}

TEST_CASE("comparison principle: trivial and ordered cases pass") {
    SublinearSpace sp = space_super();
    SchemeParams p = desk_params(4);
    SchemeOperator op(sp, p);
    GridFunction u0 = op.init(cos_window(4.0, 8.0));
    auto zero = [](double, double) { return 0.0; };

    ComparisonResult same = comparison_check(u0, u0, zero, zero, sp, p);
    CHECK(same.pass);

    GridFunction v0 = u0;
    for (int i = 0; i < v0.size(); ++i)
        v0.values[i] += 0.2 * std::max(0.0, 1.0 - std::abs(v0.x_at(i) / 3.0));
    ComparisonResult ordered = comparison_check(u0, v0, zero, zero, sp, p);
    CHECK(ordered.pass);
}

TEST_CASE("regularity audit: constants have zero moduli") {
    SublinearSpace sp = space_super();
    RunResult r = run_scheme(constant_fn(2.0), sp, desk_params(4), true);
    RegularityReport rep = regularity_audit(r.trajectory, constant_fn(2.0), 1.0,
                                            sp.config(), 0.25);
    CHECK(rep.max_spatial_ratio <= 1e-12);
    CHECK(rep.worst_time_gap <= 1e-12);
    CHECK(rep.time_ok);
}

TEST_CASE("grid csv serialization") {
    GridFunction g;
    g.x_min = -1.0;
    g.x_max = 1.0;
    g.dx = 1.0;
    g.values = {0.0, 1.0, 0.0};
    std::ostringstream os;
    g.write_csv(os);
    CHECK(os.str() == "x,value\n-1,0\n0,1\n1,0\n");
}
