#include "glspec/invariant_density.hpp"

#include "glspec/errors.hpp"
#include "glspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>

namespace glspec {

struct DensityEvaluator::Impl {
    explicit Impl(LevyModel m) : model(std::move(m)) {}
    virtual ~Impl() = default;
    virtual DensitySource source() const = 0;
    virtual std::string family() const = 0;
    virtual double nu(double x, double gap) const = 0;
    virtual double nu_deriv(double x, int n) const = 0;
    virtual double w(int n, double x, double gap) const = 0;
    virtual double coeigen(int n, double x, double gap) const = 0;
    LevyModel model;
};

namespace {

using ld = long double;

// c · y^e (1−y)^f, with the factor exp(−λ y^β) shared by all terms
struct Term {
    ld c;
    double e;
    double f;
};

using Terms = std::vector<Term>;

std::pair<long long, long long> key(double e, double f)
{
    return {std::llround(e * 1e8), std::llround(f * 1e8)};
}

Terms merge(const Terms& in)
{
    std::map<std::pair<long long, long long>, Term> acc;
    for (const auto& t : in) {
        auto k = key(t.e, t.f);
        auto it = acc.find(k);
        if (it == acc.end())
            acc.emplace(k, t);
        else
            it->second.c += t.c;
    }
    Terms out;
    for (auto& [k, t] : acc)
        if (t.c != 0.0L)
            out.push_back(t);
    return out;
}

class ClosedImpl : public DensityEvaluator::Impl {
public:
    ClosedImpl(LevyModel m, std::string tag, double scale, double lambda, double beta, bool bounded, Terms base)
        : Impl(std::move(m)), tag_(std::move(tag)), scale_(scale), lambda_(lambda), beta_(beta),
          bounded_(bounded), base_(std::move(base))
    {
        derivs_.push_back(base_);
    }

    DensitySource source() const override { return DensitySource::ClosedForm; }
    std::string family() const override { return tag_; }

    double nu(double x, double gap) const override
    {
        return double(sum(base_, x, gap) / scale_);
    }

    double nu_deriv(double x, int n) const override
    {
        if (n < 0)
            throw DomainError("nu_deriv: order must be nonnegative");
        double gap = bounded_ ? scale_ - x : inf;
        return double(sum(deriv(n), x, gap) / std::pow(ld(scale_), ld(n + 1)));
    }

    double w(int n, double x, double gap) const override
    {
        return double(sum(wterms(n), x, gap) / scale_);
    }

    double coeigen(int n, double x, double gap) const override
    {
        if (!inside(x, gap))
            throw SupportError("coeigen: x outside the support");
        ld ly, l1y;
        logs(x, gap, ly, l1y);
        const Term& ref = base_.front();
        return double(ratio_sum(wterms(n), ly, l1y, ref) / ratio_sum(base_, ly, l1y, ref));
    }

private:
    bool inside(double x, double gap) const
    {
        if (!(x > 0.0))
            return false;
        return !bounded_ || gap > 0.0;
    }

    void logs(double x, double gap, ld& ly, ld& l1y) const
    {
        ld y = ld(x) / scale_;
        ly = std::log(y);
        l1y = bounded_ ? std::log(ld(gap) / scale_) : 0.0L;
    }

    static ld ratio_sum(const Terms& ts, ld ly, ld l1y, const Term& ref)
    {
        ld s = 0.0L;
        for (const auto& t : ts)
            s += t.c * std::exp((t.e - ref.e) * ly + (t.f - ref.f) * l1y);
        return s;
    }

    ld sum(const Terms& ts, double x, double gap) const
    {
        if (!inside(x, gap))
            return 0.0L;
        ld ly, l1y;
        logs(x, gap, ly, l1y);
        ld expo = lambda_ == 0.0 ? 0.0L : -ld(lambda_) * std::pow(ld(x) / scale_, ld(beta_));
        ld s = 0.0L;
        for (const auto& t : ts)
            s += t.c * std::exp(t.e * ly + t.f * l1y + expo);
        return s;
    }

    Terms differentiate(const Terms& ts) const
    {
        Terms out;
        for (const auto& t : ts) {
            if (t.e != 0.0)
                out.push_back({t.c * t.e, t.e - 1.0, t.f});
            if (t.f != 0.0)
                out.push_back({-t.c * t.f, t.e, t.f - 1.0});
            if (lambda_ != 0.0)
                out.push_back({-t.c * ld(lambda_ * beta_), t.e + beta_ - 1.0, t.f});
        }
        return merge(out);
    }

    const Terms& deriv(int n) const
    {
        std::lock_guard<std::mutex> lock(mtx_);
        while (int(derivs_.size()) <= n)
            derivs_.push_back(differentiate(derivs_.back()));
        return derivs_[n];
    }

    const Terms& wterms(int n) const
    {
        if (n < 0)
            throw DomainError("w_n: n must be nonnegative");
        for (int k = 0; k <= n; ++k)
            deriv(k);
        std::lock_guard<std::mutex> lock(mtx_);
        while (int(wn_.size()) <= n) {
            int m = int(wn_.size());
            Terms acc;
            ld binom = 1.0L, fact = 1.0L;
            for (int k = 0; k <= m; ++k) {
                if (k > 0) {
                    binom = binom * ld(m - k + 1) / ld(k);
                    fact *= ld(k);
                }
                for (const auto& t : derivs_[k])
                    acc.push_back({t.c * binom / fact, t.e + k, t.f});
            }
            wn_.push_back(merge(acc));
        }
        return wn_[n];
    }

    std::string tag_;
    double scale_, lambda_, beta_;
    bool bounded_;
    Terms base_;
    mutable std::mutex mtx_;
    mutable std::deque<Terms> derivs_;
    mutable std::deque<Terms> wn_;
};

class MellinImpl : public DensityEvaluator::Impl {
public:
    MellinImpl(std::shared_ptr<const SpectralContext> ctx, MellinConfig cfg)
        : Impl(ctx->model()), ctx_(std::move(ctx)), cfg_(cfg)
    {
        const LevyModel& model = ctx_->model();
        d_ = ctx_->scalars().d_phi;
        a0_ = d_ < 0.0 ? 0.5 * d_ : 0.5;
        // simple pole of W at d_φ: ν(x) ~ R x^{−d_φ} as x → 0
        double h = 1e-20;
        double dphi = model.phi_unchecked(cplx(d_, h)).imag() / h;
        residue_ = std::exp(ctx_->log_W(d_ + 1.0)) / dphi;
    }

    DensitySource source() const override { return DensitySource::MellinInversion; }
    std::string family() const override { return "mellin"; }

    double nu(double x, double) const override { return invert(x, 0, false); }
    double nu_deriv(double x, int n) const override { return invert(x, n, false); }
    double w(int n, double x, double) const override { return invert(x, n, true); }
    double coeigen(int n, double x, double) const override
    {
        if (!(x > 0.0))
            throw SupportError("coeigen: x outside the support");
        return invert(x, n, true) / invert(x, 0, false);
    }

private:
    struct Line {
        double a;
        double ln_wa;
        std::vector<cplx> what;  // W(a+ib)/W(a) at the shared nodes
        size_t used = 0;         // nodes inside [0, B]
        bool done = false;
    };

    void build() const
    {
        const LevyModel& model = ctx_->model();
        const GaussLegendre& gl = gauss_legendre(cfg_.panel_nodes);
        int nl = cfg_.lines;
        lines_.resize(nl);
        double lnw = ctx_->log_W(a0_);
        for (int j = 0; j < nl; ++j) {
            lines_[j].a = a0_ + j;
            lines_[j].ln_wa = lnw;
            lnw += model.log_phi_unchecked(a0_ + j);
        }
        // log of the cap-degree polynomial weight divided by cap!
        double lfact = log_gamma(double(cfg_.derivative_cap + 1));
        double ltol = std::log(cfg_.tol);
        int remaining = nl;
        for (int p = 0; remaining > 0; ++p) {
            double lo = p * cfg_.panel_width;
            if (lo > cfg_.b_cap)
                throw UnboundedContourError("Mellin inversion: |W| does not decay fast enough on the contour");
            double half = 0.5 * cfg_.panel_width, mid = lo + half;
            std::vector<double> panel_max(nl, -inf);
            for (int i = 0; i < cfg_.panel_nodes; ++i) {
                double b = mid + half * gl.nodes[i];
                nodes_.push_back(b);
                weights_.push_back(half * gl.weights[i]);
                cplx lw = ctx_->log_W(cplx(a0_, b));
                for (int j = 0; j < nl; ++j) {
                    if (j > 0)
                        lw += model.log_phi_unchecked(cplx(lines_[j - 1].a, b));
                    cplx rel = lw - lines_[j].ln_wa;
                    lines_[j].what.push_back(std::exp(rel));
                    double mag = rel.real() + cfg_.derivative_cap * std::log1p(b) - lfact;
                    panel_max[j] = std::max(panel_max[j], mag);
                }
            }
            for (int j = 0; j < nl; ++j) {
                if (lines_[j].done)
                    continue;
                if (panel_max[j] < ltol) {
                    lines_[j].done = true;
                    lines_[j].used = nodes_.size();
                    --remaining;
                }
            }
        }
    }

    const Line& pick(double lx) const
    {
        std::call_once(once_, [this] { build(); });
        size_t best = 0;
        double bv = inf;
        for (size_t j = 0; j < lines_.size(); ++j) {
            double v = lines_[j].ln_wa - lines_[j].a * lx;
            if (v < bv) {
                bv = v;
                best = j;
            }
        }
        return lines_[best];
    }

    // ν⁽ⁿ⁾(x) when !wn, else wₙ(x)
    double invert(double x, int n, bool wn) const
    {
        if (!(x > 0.0))
            return 0.0;
        double lx = std::log(x);
        if (lx > max_log_x)
            return 0.0;
        if (lx < -max_log_x) {
            // the node grid cannot resolve x^{−ib}; keep the leading residue term
            double poly = 1.0;
            if (wn) {
                for (int k = 1; k <= n; ++k)
                    poly *= -(d_ - k) / double(k);
            } else {
                for (int k = 0; k < n; ++k)
                    poly *= -(d_ + k);
            }
            return poly * residue_ * std::exp(-d_ * lx - (wn ? 0.0 : n * lx));
        }
        const Line& L = pick(lx);
        double s = 0.0;
        for (size_t i = 0; i < L.used; ++i) {
            double b = nodes_[i];
            cplx z(L.a, b);
            cplx poly = 1.0;
            if (wn) {
                // (−1)ⁿ C(z−1, n)
                for (int k = 1; k <= n; ++k)
                    poly *= -(z - double(k)) / double(k);
            } else {
                // (−1)ⁿ (z)ₙ
                for (int k = 0; k < n; ++k)
                    poly *= -(z + double(k));
            }
            cplx osc = std::polar(1.0, -b * lx);
            s += weights_[i] * (poly * L.what[i] * osc).real();
        }
        double scale = std::exp(L.ln_wa - L.a * lx - (wn ? 0.0 : n * lx));
        return s * scale / std::numbers::pi;
    }

    static constexpr double max_log_x = 16.0;

    std::shared_ptr<const SpectralContext> ctx_;
    MellinConfig cfg_;
    double d_;
    double a0_;
    double residue_;
    mutable std::once_flag once_;
    mutable std::vector<Line> lines_;
    mutable std::vector<double> nodes_;
    mutable std::vector<double> weights_;
};

bool close_rel(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

std::shared_ptr<const DensityEvaluator::Impl> make_closed(const LevyModel& model)
{
    double s2 = model.effective_sigma2();
    if (model.is_empty() || (model.is_gauss_laguerre() && std::get<GaussLaguerreKernel>(model.jumps()).alpha == 1.0)) {
        // φ(u) = m' + σ²u: V = σ² · Gamma(m'/σ² + 1)
        double k = (model.m() + model.kernel_drift()) / s2;
        Terms base{{ld(1.0) / std::tgamma(ld(k + 1.0)), k, 0.0}};
        return std::make_shared<ClosedImpl>(model, "gamma", s2, 1.0, 1.0, false, base);
    }
    if (auto* mix = std::get_if<ExpMixture>(&model.jumps())) {
        if (mix->components.size() != 1)
            return nullptr;
        double c = mix->components[0].c, b = mix->components[0].b;
        if (model.sigma2() == 0.0) {
            // φ(u) = ρ(u + 1 − a)/(u + b): V = ρ · Beta(2 − a, b + a − 1)
            double rho = model.m() + c / (b * b);
            double a = 1.0 - model.m() * b / rho;
            double p = 2.0 - a, q = b + a - 1.0;
            ld lbeta = std::lgamma(ld(p)) + std::lgamma(ld(q)) - std::lgamma(ld(p + q));
            Terms base{{std::exp(-lbeta), p - 1.0, q - 1.0}};
            return std::make_shared<ClosedImpl>(model, "beta", rho, 0.0, 1.0, true, base);
        }
        double mf = b;
        if (model.sigma2() == 1.0 && close_rel(c, mf) && mf >= 1.0 && close_rel(model.m(), (mf * mf - 1.0) / mf)) {
            // ν(x) = (1+x) x^{𝔪−1} e^{−x} / ((𝔪+1) Γ(𝔪))
            ld cn = 1.0L / (ld(mf + 1.0) * std::tgamma(ld(mf)));
            Terms base{{cn, mf - 1.0, 0.0}, {cn, mf, 0.0}};
            return std::make_shared<ClosedImpl>(model, "small_perturbation", 1.0, 1.0, 1.0, false, base);
        }
        return nullptr;
    }
    if (auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps())) {
        if (model.sigma2() != 0.0 || model.m() != 0.0)
            return nullptr;
        double a = gl->alpha;
        double e = gl->mfrak + 1.0 / a - 1.0;
        ld cn = 1.0L / (ld(a) * std::tgamma(ld(a * gl->mfrak + 1.0)));
        Terms base{{cn, e, 0.0}};
        return std::make_shared<ClosedImpl>(model, "gauss_laguerre", 1.0, 1.0, 1.0 / a, false, base);
    }
    return nullptr;
}

std::string model_key(const LevyModel& model)
{
    char buf[64];
    std::string k;
    auto add = [&](double v) {
        std::snprintf(buf, sizeof buf, "%a,", v);
        k += buf;
    };
    add(model.sigma2());
    add(model.m());
    if (auto* mix = std::get_if<ExpMixture>(&model.jumps())) {
        k += "mix:";
        for (const auto& c : mix->components) {
            add(c.c);
            add(c.b);
        }
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps())) {
        k += "gl:";
        add(gl->alpha);
        add(gl->mfrak);
    } else {
        k += "empty";
    }
    return k;
}

} // namespace

bool DensityEvaluator::has_closed_form(const LevyModel& model)
{
    return make_closed(model) != nullptr;
}

DensityEvaluator DensityEvaluator::closed_form(const LevyModel& model)
{
    auto impl = make_closed(model);
    if (!impl)
        throw UnsupportedModelError("no closed-form invariant density for this model");
    return DensityEvaluator(impl);
}

DensityEvaluator DensityEvaluator::mellin(std::shared_ptr<const SpectralContext> ctx, MellinConfig cfg)
{
    if (ctx->scalars().flags.n_inf_c)
        throw UnsupportedModelError("Mellin inversion refused: bounded-support finite-activity model without a closed form");
    try {
        double a = std::max(ctx->config().contour_a, 1.0);
        contour_truncation(*ctx, a, 1e-10);
    } catch (const UnboundedContourError& e) {
        throw UnsupportedModelError(std::string("Mellin inversion refused: ") + e.what());
    }
    return DensityEvaluator(std::make_shared<MellinImpl>(std::move(ctx), cfg));
}

DensityEvaluator DensityEvaluator::for_model(const LevyModel& model)
{
    if (auto impl = make_closed(model))
        return DensityEvaluator(impl);
    return mellin(std::make_shared<SpectralContext>(model));
}

DensitySource DensityEvaluator::source() const
{
    return impl_->source();
}

std::string DensityEvaluator::family() const
{
    return impl_->family();
}

double DensityEvaluator::support_upper() const
{
    return impl_->model.scalars().rho;
}

const LevyModel& DensityEvaluator::model() const
{
    return impl_->model;
}

double DensityEvaluator::nu(double x) const
{
    return impl_->nu(x, support_upper() - x);
}

double DensityEvaluator::nu(double x, double gap) const
{
    return impl_->nu(x, gap);
}

double DensityEvaluator::nu_deriv(double x, int n) const
{
    if (n == 0)
        return nu(x);
    return impl_->nu_deriv(x, n);
}

double DensityEvaluator::w(int n, double x) const
{
    return impl_->w(n, x, support_upper() - x);
}

double DensityEvaluator::w(int n, double x, double gap) const
{
    return impl_->w(n, x, gap);
}

double DensityEvaluator::coeigen(int n, double x) const
{
    return coeigen(n, x, support_upper() - x);
}

double DensityEvaluator::coeigen(int n, double x, double gap) const
{
    if (!(x > 0.0) || !(gap > 0.0))
        throw SupportError("coeigen: x must lie in (0, rho)");
    if (n == 0)
        return 1.0;
    return impl_->coeigen(n, x, gap);
}

const DensityEvaluator& density_for(const LevyModel& model)
{
    static std::mutex mtx;
    static std::map<std::string, std::unique_ptr<DensityEvaluator>> cache;
    std::string k = model_key(model);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(k);
        if (it != cache.end())
            return *it->second;
    }
    auto ev = std::make_unique<DensityEvaluator>(DensityEvaluator::for_model(model));
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(k, std::move(ev));
    return *it->second;
}

double nu(const LevyModel& model, double x)
{
    if (!(x > 0.0))
        throw DomainError("nu: x must be positive");
    return density_for(model).nu(x);
}

double nu_deriv(const LevyModel& model, double x, int n)
{
    if (!(x > 0.0))
        throw DomainError("nu_deriv: x must be positive");
    if (n < 0)
        throw DomainError("nu_deriv: order must be nonnegative");
    const ModelScalars& s = model.scalars();
    if (n >= 1 && s.flags.n_inf_c && !s.n_rho.infinite && n > s.n_rho.value - 1)
        throw SmoothnessError("nu_deriv: order " + std::to_string(n) + " exceeds the smoothness index N_rho = "
                              + std::to_string(s.n_rho.value));
    return density_for(model).nu_deriv(x, n);
}

double w_n(const LevyModel& model, int n, double x)
{
    if (!(x > 0.0))
        throw DomainError("w_n: x must be positive");
    if (n < 0)
        throw DomainError("w_n: n must be nonnegative");
    return density_for(model).w(n, x);
}

double invariant_moment(const LevyModel& model, int n)
{
    return W_integer(model, n);
}

Membership coeigen_membership(const LevyModel& model, int n)
{
    const ModelScalars& s = model.scalars();
    if (s.rho == inf || s.pibar0 == inf)
        return Membership::InL2;
    double cut = s.pibar0 / (2.0 * s.rho);
    if (std::abs(n - cut) <= 1e-12 * std::max(1.0, cut))
        return Membership::Undetermined;
    return n < cut ? Membership::InL2 : Membership::NotInL2;
}

} // namespace glspec
