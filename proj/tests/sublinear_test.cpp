#include <doctest.h>

#include <cmath>

#include "stablelab/sublinear.hpp"

using namespace stablelab;

namespace {

SublinearSpace space_super(double tol = 1e-8) {
    return SublinearSpace(make_stable_config(1.5), make_uncertainty_set(0.26, 0.29),
                          {0.02, 0.02, 1.8}, tol);
}

SublinearSpace space_sub(double tol = 1e-8) {
    return SublinearSpace(make_stable_config(0.5, 0.25), make_uncertainty_set(0.08, 0.12),
                          {0.02, 0.02, 2.0}, tol);
}

}  // namespace

TEST_CASE("corner members: four above one, diagonal at or below") {
    CHECK(space_super().members().size() == 4);
    CHECK(space_sub().members().size() == 2);
    SublinearSpace degenerate(make_stable_config(1.5), make_uncertainty_set(0.25, 0.25),
                              {0.02, 0.02, 2.2}, 1e-8);
    CHECK(degenerate.members().size() == 1);
}

TEST_CASE("constant preservation") {
    SublinearSpace sp = space_super();
    for (double c : {-3.0, 0.0, 0.7}) {
        Certified e = expect(sp, constant_fn(c));
        CHECK(std::abs(e.value - c) <= 1e-12);
    }
}

TEST_CASE("odd bounded functions have zero expectation under symmetric families") {
    SublinearSpace sp = space_sub();
    Certified e = expect(sp, tanh_window(2.0, 4.0));
    CHECK(std::abs(e.value) <= 1e-7);
}

TEST_CASE("capped absolute value attains its supremum at the upper corner") {
    SublinearSpace sp = space_sub();
    TestFunction f = capped_abs_power(1.0, 1.0);
    std::vector<double> member_vals = expect_member_values(sp, f);
    REQUIRE(member_vals.size() == 2);
    CHECK(member_vals[1] > member_vals[0]);  // upper diagonal corner wins
    Certified e = expect(sp, f);
    CHECK(e.value == doctest::Approx(member_vals[1]).epsilon(1e-12));
    // Validation-mode guard: the lattice never exceeds the corner value.
    const double lattice = expect_lattice_scan(sp, f, 21);
    CHECK(lattice <= e.value + sp.quad_tol());
}

TEST_CASE("corner evaluation is exact for the affine k-dependence (lattice guard)") {
    SublinearSpace sp = space_super(1e-9);
    TestFunction f = cos_window(3.0, 6.0);
    Certified e = expect(sp, f);
    const double lattice = expect_lattice_scan(sp, f, 11);
    CHECK(lattice <= e.value + 2.0 * sp.quad_tol());
    CHECK(e.value <= lattice + 2.0 * sp.quad_tol() + 1e-6);  // some lattice point is near a corner
}

TEST_CASE("expect_shifted coincides with expect at x=0, s=1") {
    SublinearSpace sp = space_super();
    TestFunction f = cos_window(3.0, 6.0);
    CHECK(expect_shifted(sp, f, 0.0, 1.0).value ==
          doctest::Approx(expect(sp, f).value).epsilon(1e-12));
}

TEST_CASE("expect_shifted is Lipschitz in the shift") {
    SublinearSpace sp = space_super();
    TestFunction f = cos_window(3.0, 6.0);
    const double s = 0.25;
    for (double x : {-1.0, 0.0, 0.4}) {
        const double dx = 0.05;
        const double v1 = expect_shifted(sp, f, x, s).value;
        const double v2 = expect_shifted(sp, f, x + dx, s).value;
        CHECK(std::abs(v1 - v2) <= f.lipschitz * dx + 2.0 * sp.quad_tol());
    }
}

TEST_CASE("monotonicity, subadditivity, homogeneity, contraction") {
    SublinearSpace sp = space_super(1e-8);
    TestFunction f = cos_window(3.0, 6.0);
    TestFunction g = tanh_window(2.0, 4.0);
    const double tol = sp.quad_tol();

    // f <= f + (1 - f-ish): monotone via a nonnegative bump.
    TestFunction bump = hat_function();
    TestFunction fplus;
    fplus.name = "f+hat";
    auto ff = f.f;
    auto bb = bump.f;
    fplus.f = [ff, bb](double x) { return ff(x) + bb(x); };
    fplus.sup_norm = f.sup_norm + bump.sup_norm;
    fplus.lipschitz = f.lipschitz + bump.lipschitz;
    fplus.window = Window{-8.0, 8.0, 0.0, 0.0};
    CHECK(expect(sp, f).value <= expect(sp, fplus).value + tol);

    // Subadditivity.
    TestFunction fg;
    auto gg = g.f;
    fg.f = [ff, gg](double x) { return ff(x) + gg(x); };
    fg.sup_norm = f.sup_norm + g.sup_norm;
    fg.window = Window{-8.0, 8.0, g.window->value_left, g.window->value_right};
    CHECK(expect(sp, fg).value <= expect(sp, f).value + expect(sp, g).value + 3.0 * tol);

    // Positive homogeneity.
    TestFunction f3;
    f3.f = [ff](double x) { return 3.0 * ff(x); };
    f3.sup_norm = 3.0 * f.sup_norm;
    f3.window = Window{-6.0, 6.0, 0.0, 0.0};
    CHECK(std::abs(expect(sp, f3).value - 3.0 * expect(sp, f).value) <= 3.0 * tol);

    // Contraction in the sup norm.
    double gap = 0.0;
    for (double x = -8.0; x <= 8.0; x += 1e-3) gap = std::max(gap, std::abs(f(x) - g(x)));
    CHECK(std::abs(expect(sp, f).value - expect(sp, g).value) <= gap + 2.0 * tol);
}

TEST_CASE("unbounded arguments are rejected") {
    SublinearSpace sp = space_super();
    TestFunction bad;
    bad.f = [](double x) { return x; };
    bad.sup_norm = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(expect(sp, bad), ContractViolation);
}

TEST_CASE("moment estimate: n = 1 equals the direct expectation") {
    SublinearSpace sp = space_super();
    MomentRunParams params{200.0, 0.25, 1e-9};
    MomentEstimate est = moment_Mdelta(sp, 1, 1e6, params);
    Certified direct = expect(sp, capped_abs_power(1.0, 1e6));
    CHECK(est.values[0] == doctest::Approx(direct.value).epsilon(1e-10));
}

TEST_CASE("moment estimates are capped and stabilize") {
    SublinearSpace sp = space_super();
    MomentRunParams params{300.0, 0.25, 1e-9};
    const double cap = 1e6;
    MomentEstimate est = moment_Mdelta(sp, 12, cap, params);
    double first_half = 0.0, second_half = 0.0;
    for (size_t i = 0; i < est.values.size(); ++i) {
        CHECK(est.values[i] <= cap);
        if (i < est.values.size() / 2)
            first_half = std::max(first_half, est.values[i]);
        else
            second_half = std::max(second_half, est.values[i]);
    }
    CHECK(second_half <= first_half * 1.05);
    CHECK(est.m_delta_lower == doctest::Approx(std::max(first_half, second_half)));
    // Cap sensitivity stays small for the integrable case.
    for (size_t i = 0; i < est.values.size(); ++i)
        CHECK(std::abs(est.values[i] - est.values_cap10[i]) <= 0.05 * est.values[i] + 1e-6);
}
