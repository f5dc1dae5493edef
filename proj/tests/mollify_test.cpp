#include <doctest.h>

#include <cmath>

#include "stablelab/mollify.hpp"
#include "stablelab/quadrature.hpp"

using namespace stablelab;

TEST_CASE("kernel: support, positivity, unit integral, zero first moment") {
    CHECK(mollifier_kernel::value(-1.0001, 0.0) == 0.0);
    CHECK(mollifier_kernel::value(0.0001, 0.0) == 0.0);
    CHECK(mollifier_kernel::value(-0.5, 1.0001) == 0.0);
    CHECK(mollifier_kernel::value(-0.5, 0.2) > 0.0);

    Certified mass = integrate_adaptive(
        [](double tau) {
            return integrate_adaptive(
                       [tau](double e) { return mollifier_kernel::value(tau, e); }, -1.0, 1.0,
                       1e-12)
                .value;
        },
        -1.0, 0.0, 1e-11);
    CHECK(std::abs(mass.value - 1.0) <= 1e-10);

    // The space factor is even, so its first moment vanishes.
    CHECK(std::abs(mollifier_kernel::space_first_moment()) <= 1e-12);
}

TEST_CASE("mollifying a constant changes nothing") {
    HolderLipschitzFn v{[](double, double) { return 3.2; }, 0.0, 3.2, std::nullopt};
    MollifiedFn m = mollify(v, {0.1, 1.5, 32});
    CHECK(m.value(0.5, 0.7) == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(std::abs(m.derivative(0, 1, 0.5, 0.7)) <= 1e-9);
}

TEST_CASE("linear functions pass through on the interior (zero first moment)") {
    HolderLipschitzFn v{[](double, double x) { return x; }, 1.0, 100.0, std::nullopt};
    MollifiedFn m = mollify(v, {0.1, 1.5, 32});
    for (double x : {-2.0, 0.0, 1.3}) {
        CHECK(m.value(0.5, x) == doctest::Approx(x).epsilon(1e-10));
        CHECK(m.derivative(0, 1, 0.5, x) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sup gap obeys the 2 C eps estimate") {
    const double p = 1.5;
    const double ip = 1.0 / p;
    const double C = 1.0;
    HolderLipschitzFn v{
        [ip](double t, double x) { return std::min(std::abs(x), 4.0) + std::pow(t, ip); }, C, 5.0,
        std::nullopt};
    for (double eps : {0.2, 0.1, 0.05}) {
        MollifiedFn m = mollify(v, {eps, p, 32});
        double gap = 0.0;
        for (int it = 0; it <= 8; ++it)
            for (int ix = -32; ix <= 32; ++ix) {
                const double t = it / 8.0, x = ix * 0.2;
                gap = std::max(gap, std::abs(v.eval(t, x) - m.value(t, x)));
            }
        CHECK(gap <= 2.0 * C * eps);
    }
}

TEST_CASE("kernel-differentiated derivative matches finite differences") {
    HolderLipschitzFn v{
        [](double t, double x) { return std::sin(x) + 0.4 * std::pow(t + 0.1, 0.7); }, 1.0, 2.0,
        std::nullopt};
    MollifiedFn m = mollify(v, {0.15, 1.4, 32});
    const double t = 0.5, x = 0.3;
    for (double step : {1e-3, 5e-4}) {
        const double fd1 = (m.value(t, x + step) - m.value(t, x - step)) / (2.0 * step);
        CHECK(fd1 == doctest::Approx(m.derivative(0, 1, t, x)).epsilon(1e-4));
        const double fd2 =
            (m.value(t, x + step) - 2.0 * m.value(t, x) + m.value(t, x - step)) / (step * step);
        CHECK(fd2 == doctest::Approx(m.derivative(0, 2, t, x)).epsilon(1e-3));
        const double fdt = (m.value(t + step, x) - m.value(t - step, x)) / (2.0 * step);
        CHECK(fdt == doctest::Approx(m.derivative(1, 0, t, x)).epsilon(1e-3));
    }
}

TEST_CASE("derivative norm bounds: displayed closed form") {
    MollifierParams params{0.1, 2.0, 32};
    auto bounds = derivative_norm_bounds(params, 3.0);
    CHECK(bounds[{0, 0}] == doctest::Approx(2.0 * 3.0 * 0.1));
    CHECK(bounds[{1, 0}] == doctest::Approx(2.0 * 3.0 * std::pow(0.1, 1.0 - 2.0)));
    CHECK(bounds[{0, 1}] == doctest::Approx(2.0 * 3.0));
    // eps = 1 would collapse every bound to 2C (checked through the formula).
    MollifierParams unit{0.999999, 2.0, 32};
    auto b2 = derivative_norm_bounds(unit, 3.0);
    CHECK(b2[{1, 1}] == doctest::Approx(6.0).epsilon(1e-4));
}

TEST_CASE("measured x-derivative stays under its bound") {
    const double p = 1.5, C = 1.0;
    HolderLipschitzFn v{
        [](double t, double x) { return std::max(0.0, 1.0 - std::abs(x)) + 0.2 * t; }, C, 1.2,
        std::nullopt};
    for (double eps : {0.2, 0.1, 0.05}) {
        MollifiedFn m = mollify(v, {eps, p, 32});
        double worst = 0.0;
        for (int ix = -30; ix <= 30; ++ix)
            worst = std::max(worst, std::abs(m.derivative(0, 1, 0.5, ix * 0.1)));
        CHECK(worst <= 2.0 * C);
    }
}

TEST_CASE("mollified slice carries the window with an eps collar") {
    HolderLipschitzFn v{[](double, double x) { return std::clamp(x, -2.0, 2.0); }, 1.0, 2.0,
                        Window{-2.0, 2.0, -2.0, 2.0}};
    MollifiedFn m = mollify(v, {0.1, 1.5, 32});
    TestFunction slice = m.x_slice(0.5);
    REQUIRE(slice.window.has_value());
    CHECK(slice.window->lo == doctest::Approx(-2.1));
    CHECK(slice.window->hi == doctest::Approx(2.1));
    CHECK(slice.f(3.0) == doctest::Approx(2.0).epsilon(1e-10));
}
