#include "stablelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace stablelab {

namespace {

// Newton iteration on Legendre polynomials; standard Golub-Welsch would do
// as well, but this needs no linear algebra dependency.
GaussLegendre compute_gl(int n) {
    GaussLegendre r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

std::mutex g_gl_mutex;
std::map<int, GaussLegendre> g_gl_cache;

// Kronrod 15 / Gauss 7 pair on [-1,1] (Patterson values).
constexpr double kK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + hw * kK15Nodes[i]);
        k += kK15Weights[i] * v;
        if (i % 2 == 1) g += kG7Weights[i / 2] * v;
    }
    k *= hw;
    g *= hw;
    const double diff = std::abs(k - g);
    // Classic QUADPACK-style sharpened estimate.
    const double err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(1e-300, std::abs(k) + 1.0), 1.5)) + diff * 1e-8;
    return {k, std::max(err, diff * 1e-4)};
}

struct AdaptiveState {
    const RealFn& f;
    double tol;
    int evals_left;
    double integral = 0.0;
    double error = 0.0;

    void run(double a, double b, double local_tol, int depth) {
        PanelResult p = gk15(f, a, b);
        evals_left -= 15;
        if (p.error <= local_tol || depth >= 52 || evals_left <= 0) {
            integral += p.integral;
            error += p.error;
            return;
        }
        const double m = 0.5 * (a + b);
        run(a, m, 0.5 * local_tol, depth + 1);
        run(m, b, 0.5 * local_tol, depth + 1);
    }
};

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    std::lock_guard<std::mutex> lock(g_gl_mutex);
    auto it = g_gl_cache.find(n);
    if (it == g_gl_cache.end()) it = g_gl_cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

double gl_integrate(const RealFn& f, double a, double b, int n) {
    const GaussLegendre& r = gauss_legendre(n);
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * f(c + hw * r.nodes[i]);
    return s * hw;
}

Certified integrate_adaptive(const RealFn& f, double a, double b, double abs_tol, int max_evals) {
    if (a == b) return {0.0, 0.0};
    AdaptiveState st{f, abs_tol, max_evals};
    st.run(a, b, abs_tol, 0);
    if (st.error > abs_tol * 1.0001 && st.evals_left <= 0) {
        throw AccuracyError("integrate_adaptive: tolerance unreachable within node budget", st.error);
    }
    return {st.integral, st.error};
}

Certified integrate_adaptive_pieces(const RealFn& f, std::span<const double> breakpoints,
                                    double abs_tol, int max_evals) {
    std::vector<double> pts(breakpoints.begin(), breakpoints.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) throw UsageError("integrate_adaptive_pieces: need at least two breakpoints");
    Certified total;
    const double per_piece = abs_tol / static_cast<double>(pts.size() - 1);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        total = total + integrate_adaptive(f, pts[i], pts[i + 1], per_piece, max_evals);
    }
    return total;
}

Certified integrate_bounded_panels(const RealFn& f, double a, double b, double max_width,
                                   double growth) {
    if (!(b > a)) return {0.0, 0.0};
    if (!(max_width > 0.0)) throw UsageError("integrate_bounded_panels: max_width must be positive");
    Certified total;
    double left = a;
    // Geometric panels from a positive left endpoint (log-graded, which
    // resolves power-law behavior there), capped at max_width.
    double width = a > 0.0 ? std::min(max_width, a * (growth - 1.0))
                           : std::min(max_width, 1e-3 * max_width);
    while (left < b) {
        const double right = std::min(b, left + width);
        PanelResult p = gk15(f, left, right);
        total.value += p.integral;
        total.error_bound += p.error;
        left = right;
        width = std::min(max_width, width * growth);
    }
    return total;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DataError("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace stablelab
