#include <doctest.h>

#include <cmath>

#include "stablelab/quadrature.hpp"

using namespace stablelab;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    auto f = [](double x) { return 3.0 * x * x * x * x * x - x * x + 2.0; };
    // 5th degree is exact for n >= 3.
    const double exact = 2.0 * 2.0 - 2.0 / 3.0 * 1.0;  // int_{-1}^{1}
    CHECK(gl_integrate(f, -1.0, 1.0, 4) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature meets its certificate") {
    auto f = [](double x) { return std::exp(-x) * std::cos(10.0 * x); };
    const double exact = (1.0 - std::exp(-1.0) * (std::cos(10.0) - 10.0 * std::sin(10.0))) / 101.0;
    Certified r = integrate_adaptive(f, 0.0, 1.0, 1e-12);
    CHECK(std::abs(r.value - exact) <= std::max(r.error_bound, 1e-13));
}

TEST_CASE("adaptive quadrature handles integrable endpoint growth") {
    // int_0^1 x^{-1/2} dx = 2 with a breakpoint split to help the endpoint.
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    Certified r = integrate_adaptive(f, 1e-12, 1.0, 1e-6);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("piecewise adaptive splits at breakpoints") {
    auto f = [](double x) { return std::abs(x); };
    const double bp[] = {-1.0, 0.0, 2.0};
    Certified r = integrate_adaptive_pieces(f, bp, 1e-12);
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("line fit recovers exact slopes") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0}, y;
    for (double v : x) y.push_back(-0.3 * v + 1.7);
    LineFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(fit.rms_residual <= 1e-12);
}
