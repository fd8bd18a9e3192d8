#include "glspec/spectral.hpp"

#include "glspec/errors.hpp"
#include "glspec/parallel.hpp"
#include "glspec/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace glspec {

namespace {

using ld = long double;

std::vector<ld> binomial_row(int n)
{
    std::vector<ld> c(n + 1);
    c[0] = 1.0L;
    for (int k = 1; k <= n; ++k)
        c[k] = c[k - 1] * ld(n - k + 1) / ld(k);
    return c;
}

void require_support(const LevyModel& model, double x, const char* what)
{
    double rho = model.scalars().rho;
    if (!(x > 0.0) || !(x < rho)) {
        std::ostringstream os;
        os << what << ": x = " << x << " lies outside (0, " << rho << ")";
        throw SupportError(os.str());
    }
}

void require_time(const LevyModel& model, double t)
{
    if (!(t > 0.0))
        throw DomainError("time must be positive");
    if (model.scalars().flags.n_p)
        return;
    double tm = t_min(model);
    if (!(t > tm)) {
        std::ostringstream os;
        os << "t = " << t << " is not above the expansion threshold t_min = " << tm;
        throw TimeBelowThreshold(os.str());
    }
}

// Mellin-inverted densities carry ~1e-12 absolute noise
QuadConfig quad_for(const LevyModel& model, double rel, double abs)
{
    QuadConfig cfg;
    cfg.rel_tol = rel;
    cfg.abs_tol = abs;
    if (density_for(model).source() == DensitySource::MellinInversion) {
        cfg.rel_tol = std::max(rel, 1e-9);
        cfg.abs_tol = std::max(abs, 1e-10);
    }
    return cfg;
}

// ∫₀^ρ h dx with the endpoint divergence probe on a finite support
QuadResult integrate_support(const LevyModel& model, const SupportFn& h, const QuadConfig& cfg)
{
    double rho = model.scalars().rho;
    if (rho == inf) {
        return half_line([&](double x) { return h(x, inf); }, cfg);
    }
    std::vector<double> partials;
    double total = 0.0, prev_shell = 0.0;
    for (int k = 1; k <= 48; ++k) {
        double g_hi = rho * std::ldexp(1.0, 1 - k), g_lo = rho * std::ldexp(1.0, -k);
        double x_lo = rho - g_hi, x_hi = rho - g_lo;
        QuadConfig sc = cfg;
        sc.rel_tol = std::max(cfg.rel_tol, 1e-10);
        double shell = tanh_sinh(EndpointFn([&](double x, double gap) { return h(x, g_lo + gap); }), x_lo, x_hi, sc)
                           .value;
        total += shell;
        if (std::abs(total) > 1e6 && std::abs(shell) >= std::abs(prev_shell)) {
            std::ostringstream os;
            os << "integral diverges toward rho: partial integral " << total << " after " << k << " dyadic shells";
            throw DivergenceDetected(os.str());
        }
        prev_shell = shell;
    }
    return tanh_sinh(EndpointFn([&](double x, double gap) { return h(x, gap); }), 0.0, rho, cfg);
}

} // namespace

std::vector<double> EigenPair::coeffs() const
{
    return std::vector<double>(p_coeffs.begin(), p_coeffs.end());
}

double EigenPair::eval(double x) const
{
    ld s = 0.0L;
    for (size_t k = p_coeffs.size(); k-- > 0;)
        s = s * ld(x) + p_coeffs[k];
    return double(s);
}

std::vector<long double> W_integers(const LevyModel& model, int kmax)
{
    std::vector<ld> w(kmax + 1);
    w[0] = 1.0L;
    for (int k = 1; k <= kmax; ++k)
        w[k] = w[k - 1] * ld(model.phi(double(k)));
    return w;
}

EigenPair eigen_poly(const LevyModel& model, int n)
{
    if (n < 0)
        throw DomainError("eigen_poly: n must be nonnegative");
    auto w = W_integers(model, n);
    auto c = binomial_row(n);
    EigenPair e;
    e.n = n;
    e.p_coeffs.resize(n + 1);
    for (int k = 0; k <= n; ++k)
        e.p_coeffs[k] = (k % 2 ? -1.0L : 1.0L) * c[k] / w[k];
    return e;
}

EigenPair eigen_poly_recurrence(const LevyModel& model, int n)
{
    if (n < 0)
        throw DomainError("eigen_poly_recurrence: n must be nonnegative");
    ld phi1 = model.phi(1.0);
    // W_{T₁φ}(k+1) = Π_{j≤k} j φ(j+1)/(j+1)
    std::vector<ld> wt(n + 1);
    wt[0] = 1.0L;
    for (int j = 1; j <= n; ++j)
        wt[j] = wt[j - 1] * ld(j) / ld(j + 1) * ld(model.phi(double(j + 1)));
    std::vector<ld> pm2, pm1{1.0L};
    for (int k = 1; k <= n; ++k) {
        auto c = binomial_row(k - 1);
        std::vector<ld> t1(k);
        for (int j = 0; j < k; ++j)
            t1[j] = (j % 2 ? -1.0L : 1.0L) * c[j] / wt[j];
        std::vector<ld> p(k + 1, 0.0L);
        ld kk = k;
        for (int j = 0; j < k; ++j)
            p[j] += (2.0L - 1.0L / kk) * pm1[j];
        for (int j = 0; j < k; ++j)
            p[j + 1] -= t1[j] / (kk * phi1);
        for (size_t j = 0; j < pm2.size(); ++j)
            p[j] -= (1.0L - 1.0L / kk) * pm2[j];
        pm2 = std::move(pm1);
        pm1 = std::move(p);
    }
    EigenPair e;
    e.n = n;
    e.p_coeffs = pm1;
    return e;
}

double poly_eval(const Poly& p, double x)
{
    ld s = 0.0L;
    for (size_t k = p.size(); k-- > 0;)
        s = s * ld(x) + ld(p[k]);
    return double(s);
}

CoeigenValue coeigen_eval(const LevyModel& model, int n, double x)
{
    require_support(model, x, "coeigen_eval");
    const DensityEvaluator& d = density_for(model);
    double gap = model.scalars().rho - x;
    if (d.nu(x, gap) <= 1e-300)
        throw SupportError("coeigen_eval: nu(x) is below the numeric floor");
    return {d.coeigen(n, x, gap), coeigen_membership(model, n)};
}

SupportFn as_support_fn(std::function<double(double)> f)
{
    return [f = std::move(f)](double x, double) { return f(x); };
}

SupportFn poly_fn(Poly p)
{
    return [p = std::move(p)](double x, double) { return poly_eval(p, x); };
}

SupportFn eigen_fn(const LevyModel& model, int n)
{
    EigenPair e = eigen_poly(model, n);
    return [e](double x, double) { return e.eval(x); };
}

SupportFn coeigen_fn(const LevyModel& model, int n)
{
    const DensityEvaluator* d = &density_for(model);
    return [d, n](double x, double gap) { return d->coeigen(n, x, gap); };
}

QuadResult integrate_nu(const LevyModel& model, const SupportFn& h, const QuadConfig& cfg)
{
    const DensityEvaluator* d = &density_for(model);
    return integrate_support(
        model,
        [&](double x, double gap) {
            double v = d->nu(x, gap);
            if (v == 0.0)
                return 0.0;
            return h(x, gap) * v;
        },
        cfg);
}

QuadResult inner_product(const LevyModel& model, const SupportFn& f, const SupportFn& g, const QuadConfig& cfg)
{
    return integrate_nu(model, [&](double x, double gap) { return f(x, gap) * g(x, gap); }, cfg);
}

std::vector<double> dyadic_partials(const LevyModel& model, const SupportFn& h, int kmax)
{
    double rho = model.scalars().rho;
    if (rho == inf)
        throw DomainError("dyadic_partials: support is unbounded");
    const DensityEvaluator* d = &density_for(model);
    std::vector<double> out;
    double total = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        double g_hi = rho * std::ldexp(1.0, 1 - k), g_lo = rho * std::ldexp(1.0, -k);
        QuadConfig sc;
        sc.rel_tol = 1e-10;
        total += tanh_sinh(EndpointFn([&](double x, double gap) {
                               double gg = g_lo + gap;
                               double v = d->nu(x, gg);
                               return v == 0.0 ? 0.0 : h(x, gg) * v;
                           }),
                           rho - g_hi, rho - g_lo, sc)
                     .value;
        out.push_back(total);
    }
    return out;
}

Matrix gram(const LevyModel& model, int N, int threads)
{
    if (N < 0)
        throw DomainError("gram: N must be nonnegative");
    for (int m = 0; m <= N; ++m) {
        Membership mb = coeigen_membership(model, m);
        if (mb != Membership::InL2) {
            std::ostringstream os;
            os << "MembershipWarning: co-eigenfunction V_" << m << " is "
               << (mb == Membership::NotInL2 ? "not in" : "not certified in") << " L2(nu) (cutoff pibar0/(2 rho) = "
               << model.scalars().pibar0 / (2.0 * model.scalars().rho) << ")";
            throw MembershipWarning(os.str());
        }
    }
    const DensityEvaluator* d = &density_for(model);
    std::vector<EigenPair> polys;
    for (int n = 0; n <= N; ++n)
        polys.push_back(eigen_poly(model, n));
    Matrix g(N + 1, std::vector<double>(N + 1, 0.0));
    QuadConfig cfg = quad_for(model, 1e-11, 1e-13);
    parallel_for(
        size_t((N + 1) * (N + 1)),
        [&](size_t idx) {
            int n = int(idx) / (N + 1), m = int(idx) % (N + 1);
            const EigenPair& p = polys[n];
            g[n][m] = integrate_support(
                          model, [&](double x, double gap) {
                              double w = d->w(m, x, gap);
                              return w == 0.0 ? 0.0 : p.eval(x) * w;
                          },
                          cfg)
                          .value;
        },
        threads);
    return g;
}

double max_identity_deviation(const Matrix& g)
{
    double m = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g[i].size(); ++j)
            m = std::max(m, std::abs(g[i][j] - (i == j ? 1.0 : 0.0)));
    return m;
}

double t_min(const LevyModel& model)
{
    const ModelScalars& s = model.scalars();
    if (s.flags.n_p)
        return 0.0;
    if (s.flags.n_alpha)
        return -std::log(std::pow(2.0, s.flags.alpha) - 1.0);
    SpectralContext ctx(model);
    double b;
    try {
        b = contour_truncation(ctx, 1.0, 1e-10);
    } catch (const UnboundedContourError&) {
        b = 1e6;
    }
    double th = theta_phi(model, 1.0, b);
    return -std::log(std::sin(th));
}

HeatValue heat_kernel(const LevyModel& model, double t, double x, double y, int N)
{
    require_time(model, t);
    require_support(model, y, "heat_kernel");
    if (N < 0)
        throw DomainError("heat_kernel: N must be nonnegative");
    const DensityEvaluator& d = density_for(model);
    double gap = model.scalars().rho - y;
    double s = 0.0, last = 0.0;
    for (int n = 0; n <= N; ++n) {
        double term = std::exp(-n * t) * eigen_poly(model, n).eval(x) * d.w(n, y, gap);
        s += term;
        last = std::abs(term);
    }
    return {s, last};
}

double monomial_coeigen_product(const LevyModel& model, int j, int n)
{
    if (n > j)
        return 0.0;
    auto w = W_integers(model, j);
    auto c = binomial_row(j);
    return double((n % 2 ? -1.0L : 1.0L) * c[n] * w[j]);
}

double monomial_eigen_product(const LevyModel& model, int j, int n)
{
    auto w = W_integers(model, j + n);
    EigenPair e = eigen_poly(model, n);
    ld s = 0.0L;
    for (int k = 0; k <= n; ++k)
        s += e.p_coeffs[k] * w[j + k];
    return double(s);
}

double semigroup_apply(const LevyModel& model, double t, const Poly& f, double x, int N)
{
    if (!(t >= 0.0))
        throw DomainError("semigroup_apply: t must be nonnegative");
    int d = int(f.size()) - 1;
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        double c = 0.0;
        for (int j = n; j <= d; ++j)
            c += f[j] * monomial_coeigen_product(model, j, n);
        if (c == 0.0)
            continue;
        s += std::exp(-n * t) * c * eigen_poly(model, n).eval(x);
    }
    return s;
}

double semigroup_apply(const LevyModel& model, double t, const std::function<double(double)>& f, double x, int N)
{
    require_time(model, t);
    const DensityEvaluator* d = &density_for(model);
    QuadConfig cfg = quad_for(model, 1e-11, 1e-13);
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        double c = integrate_support(
                       model,
                       [&](double y, double gap) {
                           double w = d->w(n, y, gap);
                           return w == 0.0 ? 0.0 : f(y) * w;
                       },
                       cfg)
                       .value;
        s += std::exp(-n * t) * c * eigen_poly(model, n).eval(x);
    }
    return s;
}

double adjoint_apply(const LevyModel& model, double t, const Poly& g, double y, int N)
{
    require_time(model, t);
    require_support(model, y, "adjoint_apply");
    const DensityEvaluator& d = density_for(model);
    double gap = model.scalars().rho - y;
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        double c = 0.0;
        for (size_t j = 0; j < g.size(); ++j)
            if (g[j] != 0.0)
                c += g[j] * monomial_eigen_product(model, int(j), n);
        s += std::exp(-n * t) * c * d.coeigen(n, y, gap);
    }
    return s;
}

double adjoint_apply(const LevyModel& model, double t, const std::function<double(double)>& g, double y, int N)
{
    require_time(model, t);
    require_support(model, y, "adjoint_apply");
    const DensityEvaluator& d = density_for(model);
    double gap = model.scalars().rho - y;
    QuadConfig cfg = quad_for(model, 1e-11, 1e-13);
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        EigenPair e = eigen_poly(model, n);
        double c = integrate_nu(model, [&](double x, double) { return g(x) * e.eval(x); }, cfg).value;
        s += std::exp(-n * t) * c * d.coeigen(n, y, gap);
    }
    return s;
}

NormsReport norms_report(const LevyModel& model, int N, int fit_lo, int threads)
{
    if (N < 0)
        throw DomainError("norms_report: N must be nonnegative");
    NormsReport rep;
    rep.rows.resize(N + 1);
    const DensityEvaluator* d = &density_for(model);
    QuadConfig cfg = quad_for(model, 1e-10, 1e-14);
    parallel_for(
        size_t(N + 1),
        [&](size_t idx) {
            int n = int(idx);
            NormRow row;
            row.n = n;
            EigenPair e = eigen_poly(model, n);
            // cancellation grows with n; a norm that cannot be resolved is left NaN
            try {
                row.norm_p = std::sqrt(integrate_nu(model, [&](double x, double) {
                                           double p = e.eval(x);
                                           return p * p;
                                       },
                                       cfg)
                                           .value);
            } catch (const QuadratureError&) {
                row.norm_p = std::nan("");
            }
            row.membership = coeigen_membership(model, n);
            if (row.membership == Membership::NotInL2) {
                row.norm_v = inf;
            } else if (row.membership == Membership::Undetermined) {
                row.norm_v = std::nan("");
            } else {
                                try {
                    row.norm_v = std::sqrt(integrate_nu(model, [&](double x, double gap) {
                                               double v = d->coeigen(n, x, gap);
                                               return v * v;
                                           },
                                           cfg)
                                               .value);
                } catch (const QuadratureError&) {
                    row.norm_v = std::nan("");
                }
            }
            rep.rows[idx] = row;
        },
        threads);
    rep.fit_lo = fit_lo >= 0 ? fit_lo : std::max(1, N / 2);
    rep.fit_hi = N;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = std::max(1, rep.fit_lo); n <= N; ++n) {
        double v = rep.rows[n].norm_v;
        if (!std::isfinite(v) || v <= 0.0)
            continue;
        double lx = std::log(double(n)), ly = 2.0 * std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    rep.slope_v2 = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::nan("");
    return rep;
}

GapResult equilibrium_gap(const LevyModel& model, double t, const Poly& f, int N, double eps)
{
    const ModelScalars& s = model.scalars();
    if (!s.flags.n_p || !(s.pibarbar0 < inf))
        throw ClassError("equilibrium_gap: needs sigma2 > 0 and a finite integrated tail");
    if (!(t > 0.0))
        throw DomainError("equilibrium_gap: t must be positive");
    int d = int(f.size()) - 1;
    int top = std::min(N, d);
    // expansion coefficients ⟨f, 𝒱ₙ⟩ and the decayed polynomial q = Σ_{n≥1} e^{−nt} cₙ 𝒫ₙ
    std::vector<double> c(top + 1, 0.0);
    for (int n = 0; n <= top; ++n)
        for (int j = n; j <= d; ++j)
            c[n] += f[j] * monomial_coeigen_product(model, j, n);
    std::vector<EigenPair> polys;
    for (int n = 0; n <= top; ++n)
        polys.push_back(eigen_poly(model, n));

    GapResult r{};
    double s2 = model.effective_sigma2();
    r.m_under = (model.m() + model.kernel_drift() + s.pibarbar0) / s2;
    r.d_eps_plus = -s.d_phi > 0.0 ? (-s.d_phi - eps) : 0.0;

    QuadConfig cfg = quad_for(model, 1e-12, 1e-15);
    double mean = c[0];
    r.f_spread = std::sqrt(integrate_nu(model, [&](double x, double) {
                               double v = poly_eval(f, x) - mean;
                               return v * v;
                           },
                           cfg)
                               .value);
    auto q = [&](double x) {
        double v = 0.0;
        for (int n = 1; n <= top; ++n)
            v += std::exp(-n * t) * c[n] * polys[n].eval(x);
        return v;
    };
    r.gap_quadrature = std::sqrt(integrate_nu(model, [&](double x, double) {
                                     double v = q(x);
                                     return v * v;
                                 },
                                 cfg)
                                     .value);
    r.parseval_used = false;
    r.gap = r.gap_quadrature;
    if (top >= 1 && max_identity_deviation(gram(model, top)) <= 1e-6) {
        // Σ cₙ c_m e^{−(n+m)t} ⟨𝒫ₙ, 𝒫_m⟩ with the inner products from moments
        auto w = W_integers(model, 2 * top);
        ld acc = 0.0L;
        for (int n = 1; n <= top; ++n)
            for (int m = 1; m <= top; ++m) {
                ld pp = 0.0L;
                for (int j = 0; j <= n; ++j)
                    for (int k = 0; k <= m; ++k)
                        pp += polys[n].p_coeffs[j] * polys[m].p_coeffs[k] * w[j + k];
                acc += ld(c[n]) * ld(c[m]) * std::exp(-ld(n + m) * ld(t)) * pp;
            }
        r.gap = double(std::sqrt(std::max(acc, 0.0L)));
        r.parseval_used = true;
    }
    r.bound = std::sqrt((r.m_under + 1.0) / (r.d_eps_plus + 1.0)) * std::exp(-t) * r.f_spread;
    return r;
}

} // namespace glspec
