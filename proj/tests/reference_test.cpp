#include <doctest.h>

#include <cmath>

#include "stablelab/quadrature.hpp"
#include "stablelab/reference.hpp"
#include "stablelab/stable_measure.hpp"

using namespace stablelab;

TEST_CASE("extrapolation is exact on its own model") {
    std::vector<LevelValue> levels;
    for (long n : {8L, 16L, 32L}) levels.push_back({n, 1.0 + 2.0 * std::pow(n, -0.3), 1e-9});
    ReferenceValue r = extrapolated_reference(levels);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.fitted_order == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("extrapolation of constants returns the constant") {
    std::vector<LevelValue> levels{{8, 2.0, 1e-7}, {16, 2.0, 1e-7}, {32, 2.0, 1e-7}};
    ReferenceValue r = extrapolated_reference(levels);
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.certified_error <= 2e-7);
}

TEST_CASE("non-monotone levels beyond certificates are rejected") {
    std::vector<LevelValue> levels{{8, 1.0, 1e-9}, {16, 1.5, 1e-9}, {32, 1.2, 1e-9}};
    CHECK_THROWS_AS(extrapolated_reference(levels), ExtrapolationError);
}

TEST_CASE("sigma_1 equals pi, cross-checked against adaptive quadrature") {
    Certified s = sigma_alpha(1.0, 1e-10);
    CHECK(std::abs(s.value - std::acos(-1.0)) <= std::max(s.error_bound, 1e-9));
    // Independent route: adaptive quadrature of the same integrand split at
    // a modest cutoff plus its analytic remainder envelope.
    auto f = [](double r) {
        const double sn = std::sin(0.5 * r);
        return 2.0 * 2.0 * sn * sn / (r * r);
    };
    Certified head = integrate_adaptive(f, 0.0, 1.0, 1e-12);
    Certified mid = integrate_bounded_panels(f, 1.0, 40000.0, 1.0);
    CHECK(head.value + mid.value == doctest::Approx(std::acos(-1.0)).epsilon(1e-4));
}

TEST_CASE("sigma_alpha against the nonlocal cosine eigenvalue") {
    // Two independent routes to the same constant: the frequency-side
    // integral and the nonlocal operator applied to the cosine.
    for (double alpha : {0.7, 1.0, 1.5}) {
        StableConfig cfg = alpha == 1.0 ? make_stable_config(1.0, 0.5) : make_stable_config(alpha);
        Certified s = sigma_alpha(alpha, 1e-10);
        Certified nl = nonlocal_apply(cosine(), 0.0, {1.0, 1.0}, cfg, 1e-6);
        CHECK(nl.value == doctest::Approx(-s.value).epsilon(2e-5));
    }
}

TEST_CASE("stable cdf: symmetry and normalization") {
    const double t = 0.7, c = 0.4, a = 1.5;
    Certified mid = symmetric_stable_cdf(t, c, a, 0.0);
    CHECK(mid.value == doctest::Approx(0.5).epsilon(1e-8));
    Certified left = symmetric_stable_cdf(t, c, a, -2.0);
    Certified right = symmetric_stable_cdf(t, c, a, 2.0);
    CHECK(left.value + right.value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(symmetric_stable_cdf(t, c, a, 60.0).value > 0.99);
}

TEST_CASE("stable density: positivity, evenness, and cdf consistency") {
    const double t = 0.8, c = 0.3, a = 0.7;
    Certified d0 = symmetric_stable_density(t, c, a, 0.0);
    CHECK(d0.value > 0.0);
    Certified dp = symmetric_stable_density(t, c, a, 1.3);
    Certified dm = symmetric_stable_density(t, c, a, -1.3);
    CHECK(dp.value == doctest::Approx(dm.value).epsilon(1e-9));
    // d/dy CDF = density (finite differences on the inverted cdf).
    const double y = 0.9, step = 1e-4;
    const double fd = (symmetric_stable_cdf(t, c, a, y + step).value -
                       symmetric_stable_cdf(t, c, a, y - step).value) /
                      (2.0 * step);
    CHECK(fd == doctest::Approx(symmetric_stable_density(t, c, a, y).value).epsilon(1e-5));
}

TEST_CASE("semigroup property of the inverted density") {
    // p_{t1} * p_{t2} = p_{t1+t2}: composed by direct y-space convolution.
    const double c = 0.5, a = 1.2, t1 = 0.4, t2 = 0.35;
    for (double y : {0.0, 0.8}) {
        auto conv = [&](double z) {
            return symmetric_stable_density(t1, c, a, y - z, 1e-9).value *
                   symmetric_stable_density(t2, c, a, z, 1e-9).value;
        };
        Certified composed = integrate_bounded_panels(conv, -60.0, 60.0, 0.5);
        // Neglected tails: density(t1) <= p_max, integral of p_{t2} tail.
        Certified direct = symmetric_stable_density(t1 + t2, c, a, y, 1e-10);
        CHECK(composed.value == doctest::Approx(direct.value).epsilon(2e-3));
    }
}

TEST_CASE("fourier oracle: constants integrate to themselves") {
    TestFunction plateau = affine_on_window(0.0, 1.7, 1.0);  // constant 1.7 with a window tag
    ReferenceValue r = fourier_oracle(plateau, 0.8, 1.5, 0.3);
    CHECK(r.value == doctest::Approx(1.7).epsilon(1e-6));
}

TEST_CASE("fourier oracle: even function doubles its positive-half integral") {
    TestFunction phi = cos_window(4.0, 8.0);
    const double t = 0.6, c = 0.35, a = 1.5;
    ReferenceValue full = fourier_oracle(phi, t, a, c);
    auto half = [&](double y) {
        return phi(y) * symmetric_stable_density(t, c, a, y, 1e-10).value;
    };
    Certified pos = integrate_bounded_panels(half, 0.0, 8.0, 0.25);
    CHECK(full.value == doctest::Approx(2.0 * pos.value).epsilon(2e-5));
}

TEST_CASE("fourier oracle rejects non-windowed arguments") {
    CHECK_THROWS_AS(fourier_oracle(cosine(), 0.5, 1.5, 0.3), CapabilityError);
}
