#include "glspec/levy_model.hpp"

#include "glspec/errors.hpp"
#include "glspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace glspec {

namespace {

bool finite_nonneg(double v)
{
    return std::isfinite(v) && v >= 0.0;
}

} // namespace

LevyModel::LevyModel(double sigma2, double m, JumpFamily jumps)
    : sigma2_(sigma2), m_(m), jumps_(std::move(jumps))
{
    if (!finite_nonneg(sigma2_))
        throw DomainError("sigma2 must be a finite nonnegative number");
    if (!finite_nonneg(m_))
        throw DomainError("m must be a finite nonnegative number");
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        if (mix->components.empty())
            throw DomainError("exp_mixture needs at least one component");
        for (const auto& c : mix->components)
            if (!(std::isfinite(c.c) && c.c > 0.0 && std::isfinite(c.b) && c.b > 0.0))
                throw DomainError("exp_mixture components need c > 0 and b > 0");
    }
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (!(gl->alpha > 0.0 && gl->alpha <= 1.0))
            throw DomainError("gauss_laguerre alpha must lie in (0, 1]");
        if (!(std::isfinite(gl->mfrak) && gl->mfrak >= 1.0 - 1.0 / gl->alpha - 1e-14))
            throw DomainError("gauss_laguerre mfrak must satisfy mfrak >= 1 - 1/alpha");
    }
    if (sigma2_ == 0.0 && is_empty())
        throw DomainError("degenerate model: sigma2 = 0 with no jumps");
    scalars_ = compute_scalars();
}

double LevyModel::effective_sigma2() const
{
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_))
        if (gl->alpha == 1.0)
            return sigma2_ + 1.0;
    return sigma2_;
}

double LevyModel::kernel_drift() const
{
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (gl->alpha == 1.0)
            return gl->mfrak;
        double w = gl->alpha * gl->mfrak + 1.0 - gl->alpha;
        if (w <= 0.0)
            return 0.0;
        return std::exp(log_gamma_ratio(w, gl->alpha));
    }
    return 0.0;
}

cplx LevyModel::phi_unchecked(cplx z) const
{
    cplx v = m_ + sigma2_ * z;
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        for (const auto& c : mix->components)
            v += (c.c / (c.b * c.b)) * z / (z + c.b);
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (gl->alpha == 1.0)
            v += z + gl->mfrak;
        else
            v += std::exp(log_gamma_ratio(gl->alpha * (z + gl->mfrak) + 1.0 - gl->alpha, gl->alpha));
    }
    return v;
}

cplx LevyModel::log_phi_unchecked(cplx z) const
{
    return std::log(phi_unchecked(z));
}

double LevyModel::log_phi_unchecked(double u) const
{
    return std::log(phi_unchecked(cplx(u, 0.0)).real());
}

void LevyModel::check_domain(cplx z) const
{
    double d = scalars_.d_phi;
    bool ok = z.real() > d || (d == 0.0 && m_ + kernel_drift() > 0.0 && z.real() >= 0.0);
    if (!ok || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "phi: Re z = " << z.real() << " is outside the half-plane Re z > " << d;
        throw DomainError(os.str());
    }
}

cplx LevyModel::phi(cplx z) const
{
    check_domain(z);
    return phi_unchecked(z);
}

double LevyModel::phi(double u) const
{
    return phi(cplx(u, 0.0)).real();
}

cplx LevyModel::psi(cplx z) const
{
    return z * phi(z);
}

double LevyModel::psi(double u) const
{
    return u * phi(u);
}

double LevyModel::phi_derivative(double u, int order) const
{
    if (!(u > 0.0) || !std::isfinite(u))
        throw DomainError("phi_derivative: u must be positive");
    if (order != 1 && order != 2)
        throw DomainError("phi_derivative: order must be 1 or 2");
    double v = order == 1 ? sigma2_ : 0.0;
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        for (const auto& c : mix->components) {
            double d = u + c.b;
            if (order == 1)
                v += c.c / (c.b * d * d);
            else
                v -= 2.0 * c.c / (c.b * d * d * d);
        }
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        double a = gl->alpha;
        if (a == 1.0) {
            v += order == 1 ? 1.0 : 0.0;
        } else {
            double w = a * (u + gl->mfrak) + 1.0 - a;
            double phir = std::exp(log_gamma_ratio(w, a));
            double d1 = digamma_diff(w, a);
            if (order == 1)
                v += a * phir * d1;
            else
                v += a * a * phir * (d1 * d1 + trigamma_diff(w, a));
        }
    }
    return v;
}

double LevyModel::pibar(double y) const
{
    if (!(y > 0.0))
        throw DomainError("pibar: y must be positive");
    double v = 0.0;
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        for (const auto& c : mix->components)
            v += c.c / c.b * std::exp(-c.b * y);
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        double a = gl->alpha;
        if (a < 1.0)
            v = std::exp(-(gl->mfrak + 1.0 / a) * y) * std::pow(-std::expm1(-y / a), -a - 1.0)
                / gamma_fn(1.0 - a);
    }
    return v;
}

double LevyModel::pibarbar(double y) const
{
    if (!(y > 0.0))
        throw DomainError("pibarbar: y must be positive");
    double v = 0.0;
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        for (const auto& c : mix->components)
            v += c.c / (c.b * c.b) * std::exp(-c.b * y);
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (gl->alpha < 1.0) {
            // y + s/(1-s) maps [0,1) onto [y, ∞)
            auto f = [&](double s) {
                if (s >= 1.0)
                    return 0.0;
                double g = 1.0 - s;
                return pibar(y + s / g) / (g * g);
            };
            v = gauss_kronrod(f, 0.0, 1.0, 1e-12, 0.0).value;
        }
    }
    return v;
}

double LevyModel::analytic_edge() const
{
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        double bmin = inf;
        for (const auto& c : mix->components)
            bmin = std::min(bmin, c.b);
        return -bmin;
    }
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_))
        if (gl->alpha < 1.0)
            return -gl->mfrak - 1.0 / gl->alpha;
    return -inf;
}

ModelScalars LevyModel::compute_scalars() const
{
    ModelScalars s;
    double s2 = effective_sigma2();
    if (auto* mix = std::get_if<ExpMixture>(&jumps_)) {
        for (const auto& c : mix->components) {
            s.pibar0 += c.c / c.b;
            s.pibarbar0 += c.c / (c.b * c.b);
        }
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (gl->alpha < 1.0) {
            s.pibar0 = inf;
            s.pibarbar0 = inf;
        }
    }
    s.rho = (s2 > 0.0 || s.pibarbar0 == inf) ? inf : m_ + s.pibarbar0;
    if (s.rho < inf && s.pibar0 < inf) {
        s.n_rho.value = long(std::ceil(s.pibar0 / s.rho - 1e-12)) - 1;
    } else {
        s.n_rho.infinite = true;
    }

    // d_φ: zero or pole of φ closest to the origin from the left
    double phi0 = m_ + kernel_drift();
    if (phi0 <= 0.0) {
        s.d_phi = 0.0;
    } else if (is_empty() || (is_gauss_laguerre() && std::get<GaussLaguerreKernel>(jumps_).alpha == 1.0)) {
        s.d_phi = -phi0 / s2;
    } else {
        double lo = analytic_edge() + 1e-9, hi = 0.0;
        auto f = [&](double u) { return phi_unchecked(cplx(u, 0.0)).real(); };
        double flo = f(lo);
        if (flo > 0.0 && std::isfinite(flo)) {
            s.d_phi = analytic_edge();
        } else {
            while (hi - lo > 1e-13) {
                double mid = 0.5 * (lo + hi);
                double fm = f(mid);
                if (fm > 0.0 && std::isfinite(fm))
                    hi = mid;
                else
                    lo = mid;
            }
            double x = 0.5 * (lo + hi);
            for (int i = 0; i < 2; ++i) {
                double fx = f(x);
                double h = 1e-7 * std::max(1.0, std::abs(x));
                double d = (f(x + h) - f(x - h)) / (2.0 * h);
                double nx = x - fx / d;
                if (std::abs(nx - x) < 1e-10)
                    x = nx;
            }
            s.d_phi = std::min(x, 0.0);
        }
    }

    s.flags.n_p = s2 > 0.0;
    s.flags.n_inf = s2 > 0.0 || s.pibar0 == inf;
    s.flags.n_inf_c = s2 == 0.0 && s.pibar0 < inf && s.pibarbar0 < inf;
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&jumps_)) {
        if (gl->alpha < 1.0 && s2 == 0.0) {
            s.flags.n_alpha = true;
            s.flags.alpha = gl->alpha;
            s.flags.c_alpha = std::pow(gl->alpha, gl->alpha);
        }
    }
    return s;
}

cplx phi_eval(const LevyModel& model, cplx z)
{
    return model.phi(z);
}

cplx psi_eval(const LevyModel& model, cplx z)
{
    return model.psi(z);
}

double phi_derivative(const LevyModel& model, double u, int order)
{
    return model.phi_derivative(u, order);
}

ModelScalars derive_scalars(const LevyModel& model)
{
    return model.scalars();
}

double theta_phi(const LevyModel& model, double a, double b, double quad_tol)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("theta_phi: a and b must be positive");
    auto g = [&](double u) {
        double x = b * u;
        double num = std::abs(model.phi_unchecked(cplx(x, b)));
        double den = model.phi_unchecked(cplx(x, 0.0)).real();
        return std::log(num / den);
    };
    double lo = std::log(a / b);
    double upper = 1e4 * std::max(1.0, a / b);
    double hi = std::log(upper);
    auto integrand = [&](double v) {
        double u = std::exp(v);
        return g(u) * u;
    };
    QuadResult r = gauss_kronrod(integrand, lo, hi, 0.0, quad_tol);
    // integrand decays like κ/u², so the tail beyond U is close to U·g(U)
    double tail = upper * g(upper);
    double theta = r.value + std::max(0.0, tail);
    const double cap = std::numbers::pi / 2.0 + quad_tol;
    return std::clamp(theta, 0.0, cap);
}

std::string describe(const LevyModel& model)
{
    std::ostringstream os;
    os << "sigma2=" << model.sigma2() << " m=" << model.m();
    if (model.is_empty()) {
        os << " jumps=empty";
    } else if (auto* mix = std::get_if<ExpMixture>(&model.jumps())) {
        os << " jumps=exp_mixture[";
        for (size_t i = 0; i < mix->components.size(); ++i)
            os << (i ? "," : "") << "(" << mix->components[i].c << "," << mix->components[i].b << ")";
        os << "]";
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps())) {
        os << " jumps=gauss_laguerre(alpha=" << gl->alpha << ",mfrak=" << gl->mfrak << ")";
    }
    return os.str();
}

} // namespace glspec
