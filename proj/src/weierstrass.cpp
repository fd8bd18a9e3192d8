#include "glspec/weierstrass.hpp"

#include "glspec/errors.hpp"
#include "glspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glspec {

namespace {

double ln_phi_real(const LevyModel& m, double u)
{
    return m.log_phi_unchecked(u);
}

cplx ln_phi_at(const LevyModel& m, cplx z)
{
    return m.log_phi_unchecked(z);
}

double ln_phi_at(const LevyModel& m, double u)
{
    return m.log_phi_unchecked(u);
}

double magnitude(double v)
{
    return std::abs(v);
}

double magnitude(cplx v)
{
    return std::abs(v);
}

void check_half_plane(const LevyModel& model, double re)
{
    if (!(re > model.scalars().d_phi)) {
        std::ostringstream os;
        os << "W_phi: Re z = " << re << " is not to the right of d_phi = " << model.scalars().d_phi;
        throw DomainError(os.str());
    }
}

} // namespace

SpectralContext::SpectralContext(LevyModel model, SpectralConfig cfg)
    : model_(std::move(model)), cfg_(cfg)
{
    if (!(cfg_.contour_a > model_.scalars().d_phi))
        throw DomainError("contour_a must lie to the right of d_phi");
    if (cfg_.tol <= 0.0 || cfg_.product_terms_cap < 64)
        throw ConfigError("invalid spectral context configuration");
    long n = std::min(cfg_.warm_terms, cfg_.product_terms_cap);
    ln_phi_.resize(n + 1);
    ln_phi_[0] = 0.0;
    for (long k = 1; k <= n; ++k)
        ln_phi_[k] = ln_phi_real(model_, double(k));
}

double SpectralContext::ln_phi_k(long k) const
{
    if (k < long(ln_phi_.size()))
        return ln_phi_[k];
    return ln_phi_real(model_, double(k));
}

template <class T>
T SpectralContext::telescoped(T z) const
{
    // S_N = −ln φ(z) + Σ_{k≤N} (ln φ(k) − ln φ(k+z)) + z ln φ(N), Richardson in 1/N
    double zmag = magnitude(z);
    long n0 = 32;
    while (n0 < 4.0 * zmag)
        n0 *= 2;
    T s = -ln_phi_at(model_, z);
    long done = 0;
    std::vector<std::vector<T>> table;
    T prev_best{};
    for (int j = 0;; ++j) {
        long n = n0 << j;
        if (n > cfg_.product_terms_cap)
            break;
        for (long k = done + 1; k <= n; ++k)
            s += ln_phi_k(k) - ln_phi_at(model_, z + double(k));
        done = n;
        std::vector<T> row(j + 1);
        row[0] = s + z * ln_phi_k(n);
        double f = 1.0;
        for (int l = 1; l <= j; ++l) {
            f *= 2.0;
            row[l] = row[l - 1] + (row[l - 1] - table[j - 1][l - 1]) / (f - 1.0);
        }
        T best = row[j];
        table.push_back(std::move(row));
        if (j >= 2 && magnitude(best - prev_best) <= 0.1 * cfg_.tol * std::max(1.0, magnitude(best)))
            return best;
        prev_best = best;
    }
    std::ostringstream os;
    os << "log_W: product did not converge within " << cfg_.product_terms_cap << " terms";
    throw ConvergenceError(os.str());
}

cplx SpectralContext::log_W(cplx z) const
{
    check_half_plane(model_, z.real());
    cplx head = 0.0;
    while (z.real() < 1.0) {
        head -= ln_phi_at(model_, z);
        z += 1.0;
    }
    if (z.imag() == 0.0)
        return head + telescoped(z.real());
    return head + telescoped(z);
}

double SpectralContext::log_W(double u) const
{
    check_half_plane(model_, u);
    double head = 0.0;
    while (u < 1.0) {
        head -= ln_phi_at(model_, u);
        u += 1.0;
    }
    return head + telescoped(u);
}

cplx SpectralContext::W(cplx z) const
{
    return std::exp(log_W(z));
}

double SpectralContext::functional_residual(cplx z) const
{
    cplx w1 = W(z + 1.0);
    cplx w0 = W(z);
    cplx p = model_.phi(z);
    return std::abs(w1 - p * w0) / std::abs(w1);
}

double SpectralContext::gamma_phi() const
{
    long n = 32;
    double s = 0.0;
    long done = 0;
    std::vector<std::vector<double>> table;
    double prev = 0.0;
    for (int j = 0;; ++j) {
        if (n > cfg_.product_terms_cap)
            break;
        for (long k = done + 1; k <= n; ++k)
            s += model_.phi_derivative(double(k), 1) / std::exp(ln_phi_k(k));
        done = n;
        std::vector<double> row(j + 1);
        row[0] = s - ln_phi_k(n);
        double f = 1.0;
        for (int l = 1; l <= j; ++l) {
            f *= 2.0;
            row[l] = row[l - 1] + (row[l - 1] - table[j - 1][l - 1]) / (f - 1.0);
        }
        double best = row[j];
        table.push_back(std::move(row));
        if (j >= 2 && std::abs(best - prev) <= 0.1 * cfg_.tol)
            return best;
        prev = best;
        n *= 2;
    }
    throw ConvergenceError("gamma_phi: estimates at N and 2N still differ at the term cap");
}

double gamma_phi(const SpectralContext& ctx)
{
    return ctx.gamma_phi();
}

cplx log_W(const SpectralContext& ctx, cplx z)
{
    return ctx.log_W(z);
}

cplx mellin_V(const SpectralContext& ctx, cplx z)
{
    return ctx.W(z);
}

cplx mellin_I(const SpectralContext& ctx, cplx z)
{
    if (!(z.real() > 0.0))
        throw DomainError("mellin_I: Re z must be positive");
    return std::exp(log_gamma(z) - ctx.log_W(z));
}

double W_integer(const LevyModel& model, int n)
{
    if (n < 0)
        throw DomainError("W_integer: n must be nonnegative");
    double p = 1.0;
    for (int k = 1; k <= n; ++k)
        p *= model.phi(double(k));
    return p;
}

double asymp_G(const SpectralContext& ctx, double u)
{
    if (!(u >= 1.0))
        throw DomainError("asymp_G: u must be at least 1");
    if (u == 1.0)
        return 0.0;
    auto f = [&](double r) { return ctx.model().log_phi_unchecked(r); };
    return gauss_kronrod(f, 1.0, u, 1e-13, 1e-14).value;
}

double contour_envelope(const SpectralContext& ctx, double a, double B)
{
    const LevyModel& model = ctx.model();
    check_half_plane(model, a);
    // shift right of the origin, where the estimate holds, and divide back
    double shift_div = 1.0;
    double a0 = a;
    while (a0 <= 0.5) {
        shift_div *= std::abs(model.phi_unchecked(cplx(a0, B)));
        a0 += 1.0;
    }
    double pa = model.phi_unchecked(cplx(a0, 0.0)).real();
    double pab = std::abs(model.phi_unchecked(cplx(a0, B)));
    double theta = theta_phi(model, a0, B, 1e-10);
    double lw = ctx.log_W(a0);
    double log_env = 0.5 * std::log(pa / pab) + lw - B * theta + 19.0 / (8.0 * a0);
    return std::exp(log_env) / shift_div;
}

double contour_truncation(const SpectralContext& ctx, double a, double tol)
{
    if (!(tol > 0.0))
        throw DomainError("contour_truncation: tol must be positive");
    const double cap = 1e6;
    double hi = 1.0;
    while (contour_envelope(ctx, a, hi) > tol) {
        hi *= 2.0;
        if (hi > cap)
            throw UnboundedContourError("contour_truncation: envelope stays above tol up to B = 1e6");
    }
    double lo = hi / 2.0;
    if (hi == 1.0)
        lo = 0.0;
    while (hi - lo > 1e-3 * hi) {
        double mid = 0.5 * (lo + hi);
        if (contour_envelope(ctx, a, mid) > tol)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace glspec
