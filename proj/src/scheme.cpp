#include "stablelab/scheme.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>

#include "stablelab/quadrature.hpp"

namespace stablelab {

double GridFunction::interp(double x) const {
    if (x <= x_min) return values.front();
    if (x >= x_max) return values.back();
    const double s = (x - x_min) / dx;
    const int i = std::min(static_cast<int>(s), size() - 2);
    const double w = s - i;
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

double GridFunction::lipschitz_ratio() const {
    double m = 0.0;
    for (int i = 0; i + 1 < size(); ++i) m = std::max(m, std::abs(values[i + 1] - values[i]));
    return m / dx;
}

TestFunction GridFunction::as_test_function() const {
    TestFunction t;
    t.name = "grid-interpolant";
    GridFunction copy = *this;
    t.f = [copy](double x) { return copy.interp(x); };
    t.sup_norm = sup_norm_bound;
    t.lipschitz = lipschitz_ratio();
    t.window = Window{x_min, x_max, values.front(), values.back()};
    return t;
}

void GridFunction::write_csv(std::ostream& os) const {
    os << "x,value\n";
    char buf[64];
    for (int i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x_at(i), values[i]);
        os << buf;
    }
}

namespace {

std::mutex g_fftw_mutex;  // fftw planning is not thread-safe

struct FftwRealBuf {
    double* p = nullptr;
    explicit FftwRealBuf(size_t n) : p(fftw_alloc_real(n)) {}
    ~FftwRealBuf() { fftw_free(p); }
};
struct FftwCplxBuf {
    fftw_complex* p = nullptr;
    explicit FftwCplxBuf(size_t n) : p(fftw_alloc_complex(n)) {}
    ~FftwCplxBuf() { fftw_free(p); }
};

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Recursive per-cell quadrature of f and of the ascending-ramp moment
// against f, with an error estimate from embedded Gauss rules.
struct CellIntegral {
    double i0 = 0.0;  // int f
    double i1 = 0.0;  // int ramp * f, ramp = (y - cell_left)/dx with the
                      // reference left edge fixed by the caller
    double err = 0.0;
};

void cell_integrate(const std::function<double(double)>& f, double a, double b, double ramp_left,
                    double inv_dx, double tol, int depth, CellIntegral& out) {
    const GaussLegendre& g8 = gauss_legendre(8);
    const GaussLegendre& g16 = gauss_legendre(16);
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double i0a = 0.0, i1a = 0.0, i0b = 0.0, i1b = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double y = c + hw * g8.nodes[i];
        const double v = f(y) * g8.weights[i];
        i0a += v;
        i1a += v * (y - ramp_left) * inv_dx;
    }
    for (int i = 0; i < 16; ++i) {
        const double y = c + hw * g16.nodes[i];
        const double v = f(y) * g16.weights[i];
        i0b += v;
        i1b += v * (y - ramp_left) * inv_dx;
    }
    i0a *= hw; i1a *= hw; i0b *= hw; i1b *= hw;
    const double diff = std::abs(i0b - i0a) + std::abs(i1b - i1a);
    if (diff <= tol || depth >= 10) {
        out.i0 += i0b;
        out.i1 += i1b;
        out.err += diff;
        return;
    }
    cell_integrate(f, a, c, ramp_left, inv_dx, 0.5 * tol, depth + 1, out);
    cell_integrate(f, c, b, ramp_left, inv_dx, 0.5 * tol, depth + 1, out);
}

struct WeightTable {
    std::vector<double> w;  // index m + (N-1), m in [-(N-1), N-1]
    double tail_left = 0.0;
    double tail_right = 0.0;
    double quad_err = 0.0;
};

WeightTable build_weight_table(const WkDistribution& W, double c, double dx, int N,
                               double quad_tol) {
    WeightTable t;
    t.w.assign(2 * N - 1, 0.0);
    const double inv_c = 1.0 / c, inv_dx = 1.0 / dx;
    auto f_c = [&](double y) { return W.pdf(y * inv_c) * inv_c; };

    const double cell_tol = quad_tol / (2.0 * N);
    // Cells [m dx, (m+1) dx] for m in [-N, N-1]; density kinks at +-c.
    for (int m = -N; m < N; ++m) {
        const double a = m * dx, b = (m + 1) * dx;
        CellIntegral ci;
        double pts[4] = {a, b, 0.0, 0.0};
        int np = 2;
        if (-c > a && -c < b) pts[np++] = -c;
        if (c > a && c < b) pts[np++] = c;
        std::sort(pts, pts + np);
        for (int s = 0; s + 1 < np; ++s)
            cell_integrate(f_c, pts[s], pts[s + 1], a, inv_dx, cell_tol, 0, ci);
        t.quad_err += ci.err;
        const double down = ci.i0 - ci.i1;  // weight of node m
        const double up = ci.i1;            // weight of node m+1
        if (m >= -(N - 1))
            t.w[m + (N - 1)] += down;
        else
            t.tail_left += down;
        if (m + 1 <= N - 1)
            t.w[m + 1 + (N - 1)] += up;
        else
            t.tail_right += up;
    }
    t.tail_left += W.cdf(-N * dx * inv_c);
    t.tail_right += 1.0 - W.cdf(N * dx * inv_c);

    // Normalize to total mass one so the step preserves constants exactly.
    double total = t.tail_left + t.tail_right;
    for (double v : t.w) total += v;
    t.quad_err += std::abs(total - 1.0);
    const double inv_total = 1.0 / total;
    for (double& v : t.w) v *= inv_total;
    t.tail_left *= inv_total;
    t.tail_right *= inv_total;
    return t;
}

}  // namespace

struct SchemeOperator::Impl {
    const SublinearSpace& space;
    SchemeParams params;
    int half_nodes;  // M: grid is [-M dx, M dx], N = 2M+1 nodes
    int N;
    double c;  // h^{1/alpha}
    size_t fft_size;
    std::vector<WeightTable> tables;
    std::vector<FftwCplxBuf> kernel_spectra;
    double quad_err = 0.0;
    double tail_mass = 0.0;

    std::unique_ptr<FftwRealBuf> real_buf;
    std::unique_ptr<FftwCplxBuf> cplx_buf;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    Impl(const SublinearSpace& sp, const SchemeParams& p) : space(sp), params(p) {
        if (p.n < 1) throw DomainError("scheme: n must be >= 1");
        if (!(p.dx > 0.0) || !(p.grid_radius > 0.0))
            throw DomainError("scheme: grid spacing and radius must be positive");
        half_nodes = std::max(1, static_cast<int>(std::llround(p.grid_radius / p.dx)));
        N = 2 * half_nodes + 1;
        c = std::pow(p.h(), sp.config().inv_alpha());
        fft_size = next_pow2(static_cast<size_t>(3 * N));

        {
            std::lock_guard<std::mutex> lock(g_fftw_mutex);
            real_buf = std::make_unique<FftwRealBuf>(fft_size);
            cplx_buf = std::make_unique<FftwCplxBuf>(fft_size / 2 + 1);
            fwd = fftw_plan_dft_r2c_1d(static_cast<int>(fft_size), real_buf->p, cplx_buf->p,
                                       FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_1d(static_cast<int>(fft_size), cplx_buf->p, real_buf->p,
                                       FFTW_ESTIMATE);
        }

        const double reach = std::max(p.grid_radius - std::abs(p.x_eval), 0.0) / c;
        for (const WkDistribution& W : sp.members()) {
            tables.push_back(build_weight_table(W, c, p.dx, N, p.quad_tol));
            quad_err = std::max(quad_err, tables.back().quad_err);
            tail_mass = std::max(tail_mass, std::min(1.0, W.two_sided_tail_mass(std::max(reach, 1.0))));
            // Kernel spectrum: K[q] = w_{q-(N-1)}, zero-padded.
            std::fill(real_buf->p, real_buf->p + fft_size, 0.0);
            std::copy(tables.back().w.begin(), tables.back().w.end(), real_buf->p);
            fftw_execute(fwd);
            kernel_spectra.emplace_back(fft_size / 2 + 1);
            std::memcpy(kernel_spectra.back().p, cplx_buf->p,
                        (fft_size / 2 + 1) * sizeof(fftw_complex));
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        real_buf.reset();
        cplx_buf.reset();
    }
};

SchemeOperator::SchemeOperator(const SublinearSpace& space, const SchemeParams& params)
    : impl_(std::make_unique<Impl>(space, params)) {}
SchemeOperator::~SchemeOperator() = default;

double SchemeOperator::h() const { return impl_->params.h(); }
int SchemeOperator::grid_size() const { return impl_->N; }
double SchemeOperator::step_quad_err() const { return impl_->quad_err; }
double SchemeOperator::step_tail_mass() const { return impl_->tail_mass; }
double SchemeOperator::fft_roundoff() const {
    return 1e-14 * std::log2(static_cast<double>(impl_->fft_size));
}

GridFunction SchemeOperator::init(const TestFunction& phi) const {
    GridFunction g;
    g.dx = impl_->params.dx;
    g.x_min = -impl_->half_nodes * g.dx;
    g.x_max = impl_->half_nodes * g.dx;
    g.time_label = 0.0;
    g.sup_norm_bound = phi.sup_norm;
    g.values.resize(impl_->N);
    for (int i = 0; i < impl_->N; ++i) g.values[i] = phi(g.x_at(i));
    return g;
}

GridFunction SchemeOperator::step(const GridFunction& u) const {
    Impl& im = *impl_;
    const int N = im.N;
    if (u.size() != N) throw UsageError("scheme step: grid size mismatch");
    if (u.time_label + im.params.h() > 1.0 + 1e-12)
        throw SequencingError("scheme step: time would pass 1");

    // Extended signal S[p] = u[clamp(p - (N-1))], zero-padded to the FFT size.
    std::fill(im.real_buf->p, im.real_buf->p + im.fft_size, 0.0);
    for (int p = 0; p < 3 * N - 2; ++p) {
        const int j = std::clamp(p - (N - 1), 0, N - 1);
        im.real_buf->p[p] = u.values[j];
    }
    fftw_execute(im.fwd);
    std::vector<std::complex<double>> sig(im.fft_size / 2 + 1);
    for (size_t q = 0; q < sig.size(); ++q)
        sig[q] = {im.cplx_buf->p[q][0], im.cplx_buf->p[q][1]};

    GridFunction v;
    v.x_min = u.x_min;
    v.x_max = u.x_max;
    v.dx = u.dx;
    v.time_label = u.time_label + im.params.h();
    v.sup_norm_bound = u.sup_norm_bound;
    v.values.assign(N, -std::numeric_limits<double>::infinity());

    const double scale = 1.0 / static_cast<double>(im.fft_size);
    const double u0 = u.values.front(), uN = u.values.back();
    for (size_t m = 0; m < im.tables.size(); ++m) {
        // corr = IFFT(conj(K^) * S^)
        for (size_t q = 0; q < sig.size(); ++q) {
            const std::complex<double> k(im.kernel_spectra[m].p[q][0], im.kernel_spectra[m].p[q][1]);
            const std::complex<double> r = std::conj(k) * sig[q];
            im.cplx_buf->p[q][0] = r.real();
            im.cplx_buf->p[q][1] = r.imag();
        }
        fftw_execute(im.inv);
        const double boundary = u0 * im.tables[m].tail_left + uN * im.tables[m].tail_right;
        for (int i = 0; i < N; ++i) {
            const double val = im.real_buf->p[i] * scale + boundary;
            if (val > v.values[i]) v.values[i] = val;
        }
    }

    if (im.params.nonmonotone_hook) {
        // Deliberately overshooting interpolation (negative control).
        for (int i = 1; i + 1 < N; ++i)
            v.values[i] += 0.5 * (u.values[i - 1] - 2.0 * u.values[i] + u.values[i + 1]);
    }
    return v;
}

RunResult run_scheme(const TestFunction& phi, const SublinearSpace& space,
                     const SchemeParams& params, bool keep_trajectory) {
    SchemeOperator op(space, params);
    RunResult r;
    GridFunction u = op.init(phi);
    if (keep_trajectory) r.trajectory.push_back(u);
    for (int j = 0; j < params.n; ++j) {
        u = op.step(u);
        r.tail_budget += 2.0 * phi.sup_norm * op.step_tail_mass();
        if (keep_trajectory) r.trajectory.push_back(u);
    }
    r.interp_term = params.n * phi.modulus_bound(params.dx);
    r.quad_term =
        params.n * std::max(phi.sup_norm, 1.0) * (op.step_quad_err() + op.fft_roundoff());
    r.certificate = r.tail_budget + r.interp_term + r.quad_term;
    r.center_value = u.values[u.center_index()];
    r.grid = std::move(u);
    return r;
}

RegularityReport regularity_audit(const std::vector<GridFunction>& trajectory,
                                  const TestFunction& phi, double m_delta_capped,
                                  const StableConfig& cfg, double h, double spatial_slack) {
    if (trajectory.empty()) throw UsageError("regularity_audit: empty trajectory");
    RegularityReport rep;
    for (const GridFunction& g : trajectory)
        rep.max_spatial_ratio = std::max(rep.max_spatial_ratio, g.lipschitz_ratio());
    rep.spatial_bound = phi.lipschitz * (1.0 + spatial_slack);
    rep.spatial_margin = rep.spatial_bound - rep.max_spatial_ratio;
    rep.spatial_ok = rep.spatial_margin >= 0.0;

    const double da = cfg.delta / cfg.alpha;
    const double ktilde = std::pow(phi.lipschitz, cfg.delta) *
                          std::pow(2.0 * phi.sup_norm, 1.0 - cfg.delta) * m_delta_capped;
    rep.worst_time_gap = -std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < trajectory.size(); ++p) {
        for (size_t q = p + 1; q < trajectory.size(); ++q) {
            double dmax = 0.0;
            for (int i = 0; i < trajectory[p].size(); ++i)
                dmax = std::max(dmax, std::abs(trajectory[p].values[i] - trajectory[q].values[i]));
            const double dt = std::abs(trajectory[p].time_label - trajectory[q].time_label);
            const double bound = ktilde * (std::pow(dt, da) + std::pow(h, da));
            rep.worst_time_gap = std::max(rep.worst_time_gap, dmax - bound);
        }
    }
    rep.time_ok = rep.worst_time_gap <= 1e-12;
    return rep;
}

ComparisonResult comparison_check(const GridFunction& u0, const GridFunction& v0,
                                  const std::function<double(double, double)>& h1,
                                  const std::function<double(double, double)>& h2,
                                  const SublinearSpace& space, const SchemeParams& params) {
    if (u0.size() != v0.size() || u0.dx != v0.dx)
        throw UsageError("comparison_check: grids must match");
    SchemeOperator op(space, params);
    const double h = params.h();
    const int N = u0.size();

    double init_gap = 0.0;
    for (int i = 0; i < N; ++i)
        init_gap = std::max(init_gap, std::max(0.0, u0.values[i] - v0.values[i]));

    GridFunction u = u0, v = v0;
    double resid_gap = 0.0;
    const double sup_scale = std::max(u0.sup_norm_bound, v0.sup_norm_bound) + 2.0;
    ComparisonResult res;
    res.worst_margin = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= params.n; ++j) {
        u = op.step(u);
        v = op.step(v);
        const double t = j * h;
        for (int i = 0; i < N; ++i) {
            const double r1 = h1(t, u.x_at(i));
            const double r2 = h2(t, u.x_at(i));
            u.values[i] += h * r1;
            v.values[i] += h * r2;
            resid_gap = std::max(resid_gap, std::max(0.0, r1 - r2));
        }
        const double slack =
            2.0 * j * sup_scale * (op.step_quad_err() + op.fft_roundoff());
        for (int i = 0; i < N; ++i) {
            const double lhs = u.values[i] - v.values[i];
            const double rhs = init_gap + t * resid_gap + slack;
            res.worst_margin = std::min(res.worst_margin, rhs - lhs);
        }
        res.slack = slack;
    }
    res.pass = res.worst_margin >= 0.0;
    return res;
}

}  // namespace stablelab
