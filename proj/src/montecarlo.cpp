#include "glspec/montecarlo.hpp"

#include "glspec/errors.hpp"
#include "glspec/parallel.hpp"
#include "glspec/quadrature.hpp"
#include "glspec/spectral.hpp"
#include "glspec/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace glspec {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    constexpr std::uint64_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr std::uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = M0 * ctr[0], p1 = M1 * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t path)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, path_(path)
{
}

void PathStream::refill()
{
    buf_ = philox4x32({std::uint32_t(path_), std::uint32_t(path_ >> 32), std::uint32_t(block_),
                       std::uint32_t(block_ >> 32)},
                      key_);
    ++block_;
    next_ = 0;
}

double PathStream::uniform()
{
    if (next_ >= 4)
        refill();
    return (double(buf_[next_++]) + 0.5) * 0x1p-32;
}

double PathStream::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double th = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

double PathStream::exponential(double rate)
{
    return -std::log(uniform()) / rate;
}

namespace {

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// jump part of ξ: drift, Brownian scale and a sampler for the jump sizes
class XiDynamics {
public:
    XiDynamics(const LevyModel& model, const PathConfig& cfg) : dt_(cfg.dt)
    {
        if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
            throw ConfigError("dt must be positive");
        if (cfg.n_paths <= 0)
            throw ConfigError("paths must be positive");
        mu_ = model.m() + model.kernel_drift();
        double s2 = model.effective_sigma2();
        scale_ = std::sqrt(2.0 * s2 * dt_);
        if (auto* mix = std::get_if<ExpMixture>(&model.jumps())) {
            for (const auto& c : mix->components) {
                rate_ += c.c / c.b;
                cum_.push_back(rate_);
                b_.push_back(c.b);
            }
            mu_ += model.scalars().pibarbar0;
        } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps()); gl && gl->alpha < 1.0) {
            if (!(cfg.truncate_eps > 0.0))
                throw UnsupportedJumpsError(
                    "Gauss-Laguerre kernel has infinite jump activity; enable small-jump truncation");
            model_ = &model;
            eps_ = cfg.truncate_eps;
            rate_ = model.pibar(eps_);
            mu_ += eps_ * rate_ + model.pibarbar(eps_);
            // geometric table of Π̄(y)/Π̄(eps) for bracketing the inversion
            double y = eps_;
            while (true) {
                double u = model.pibar(y) / rate_;
                ty_.push_back(y);
                tu_.push_back(u);
                if (u < 1e-300 || y > 1e4)
                    break;
                y *= 1.05;
            }
        }
    }

    double mu() const { return mu_; }

    // advances ξ over one grid step
    double step(double xi, double t, double& next_jump, PathStream& rng) const
    {
        xi += mu_ * dt_ + scale_ * rng.normal();
        double end = t + dt_;
        while (rate_ > 0.0 && next_jump <= end) {
            xi -= jump_size(rng);
            next_jump += rng.exponential(rate_);
        }
        return xi;
    }

    double first_jump(PathStream& rng) const
    {
        return rate_ > 0.0 ? rng.exponential(rate_) : std::numeric_limits<double>::infinity();
    }

private:
    double jump_size(PathStream& rng) const
    {
        if (!model_) {
            double u = rng.uniform() * rate_;
            std::size_t i = std::size_t(std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
            i = std::min(i, b_.size() - 1);
            return rng.exponential(b_[i]);
        }
        // invert Π̄(y)/Π̄(eps) = u
        double u = rng.uniform();
        auto it = std::lower_bound(tu_.begin(), tu_.end(), u, std::greater<double>());
        if (it == tu_.end())
            return ty_.back();
        std::size_t i = std::size_t(it - tu_.begin());
        if (i == 0)
            return ty_[0];
        double lo = ty_[i - 1], hi = ty_[i];
        for (int k = 0; k < 40; ++k) {
            double mid = 0.5 * (lo + hi);
            if (model_->pibar(mid) / rate_ > u)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double dt_;
    double mu_ = 0.0;
    double scale_ = 0.0;
    double rate_ = 0.0;
    std::vector<double> cum_, b_;
    const LevyModel* model_ = nullptr;
    double eps_ = 0.0;
    std::vector<double> ty_, tu_;
};

constexpr std::size_t chunk = 512;

template <class PathFn>
std::vector<double> per_path(const PathConfig& cfg, PathFn fn)
{
    std::size_t n = std::size_t(cfg.n_paths);
    std::vector<double> out(n);
    std::size_t nchunks = (n + chunk - 1) / chunk;
    parallel_for(
        nchunks,
        [&](std::size_t c) {
            std::size_t end = std::min(n, (c + 1) * chunk);
            for (std::size_t p = c * chunk; p < end; ++p)
                out[p] = fn(std::uint64_t(p));
        },
        cfg.threads);
    return out;
}

} // namespace

MCEstimate estimate(const std::vector<double>& values)
{
    MCEstimate e;
    e.n_paths = long(values.size());
    if (values.empty())
        return e;
    double n = double(values.size());
    e.mean = pairwise_sum(values.data(), values.size()) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    if (values.size() > 1)
        e.std_error = std::sqrt(pairwise_sum(sq.data(), sq.size()) / (n - 1.0) / n);
    return e;
}

TruncationInfo truncation_info(const LevyModel& model, const PathConfig& cfg)
{
    TruncationInfo info;
    auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps());
    if (!gl || gl->alpha >= 1.0 || !(cfg.truncate_eps > 0.0))
        return info;
    double eps = cfg.truncate_eps;
    info.truncated = true;
    info.eps = eps;
    info.rate = model.pibar(eps);
    // ∫_0^eps y²Π(dy) = 2∫_0^eps yΠ̄(y)dy − eps²Π̄(eps)
    double I = gauss_kronrod([&](double y) { return y > 0.0 ? y * model.pibar(y) : 0.0; }, 0.0, eps, 1e-10, 0.0)
                   .value;
    info.dropped_variance = 2.0 * I - eps * eps * info.rate;
    return info;
}

std::vector<double> simulate_xi(const LevyModel& model, const PathConfig& cfg, std::uint64_t path)
{
    XiDynamics dyn(model, cfg);
    if (!(cfg.horizon > 0.0))
        throw ConfigError("horizon must be positive");
    long steps = long(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    std::vector<double> xi(std::size_t(steps) + 1, 0.0);
    PathStream rng(cfg.seed, path);
    double next_jump = dyn.first_jump(rng);
    for (long k = 0; k < steps; ++k)
        xi[std::size_t(k) + 1] = dyn.step(xi[std::size_t(k)], double(k) * cfg.dt, next_jump, rng);
    return xi;
}

std::vector<double> sample_xi(const LevyModel& model, const PathConfig& cfg, double t)
{
    XiDynamics dyn(model, cfg);
    if (!(t >= 0.0))
        throw ConfigError("t must be nonnegative");
    long steps = std::lround(t / cfg.dt);
    return per_path(cfg, [&](std::uint64_t p) {
        PathStream rng(cfg.seed, p);
        double next_jump = dyn.first_jump(rng);
        double xi = 0.0;
        for (long k = 0; k < steps; ++k)
            xi = dyn.step(xi, double(k) * cfg.dt, next_jump, rng);
        return xi;
    });
}

std::vector<double> sample_gl(const LevyModel& model, const PathConfig& cfg, double x0, double t)
{
    XiDynamics dyn(model, cfg);
    if (!(x0 > 0.0))
        throw ConfigError("x0 must be positive");
    if (!(t > 0.0))
        throw ConfigError("t must be positive");
    double target = std::expm1(t) / x0;
    double horizon = cfg.horizon;
    if (!(horizon > 0.0))
        horizon = 10.0 + 4.0 * std::log1p(target) / std::max(dyn.mu(), 0.25);
    long max_steps = long(std::ceil(horizon / cfg.dt));
    double dt = cfg.dt, scale = x0 * std::exp(-t);
    return per_path(cfg, [&](std::uint64_t p) {
        PathStream rng(cfg.seed, p);
        double next_jump = dyn.first_jump(rng);
        double xi = 0.0, e0 = 1.0, clock = 0.0;
        long limit = max_steps;
        bool extended = false;
        for (long k = 0;; ++k) {
            if (k >= limit) {
                if (extended) {
                    std::ostringstream os;
                    os << "Lamperti clock did not ring within horizon " << double(limit) * dt << " on path " << p;
                    throw HorizonError(os.str());
                }
                extended = true;
                limit *= 4;
            }
            xi = dyn.step(xi, double(k) * dt, next_jump, rng);
            double e1 = std::exp(xi);
            clock += 0.5 * dt * (e0 + e1);
            if (clock > target)
                return scale * e1;
            e0 = e1;
        }
    });
}

namespace {

CheckResult finish(MCEstimate est, double target)
{
    CheckResult r{est, target, 0.0};
    double diff = est.mean - target;
    if (est.std_error > 0.0)
        r.z = diff / est.std_error;
    else if (diff != 0.0)
        r.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
    return r;
}

} // namespace

CheckResult eigen_check(const LevyModel& model, const std::vector<double>& samples, double x0, double t, int n)
{
    if (n < 0 || n > 5)
        throw ConfigError("eigen_check: n must lie in 0..5");
    EigenPair P = eigen_poly(model, n);
    std::vector<double> v(samples.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = P.eval(samples[i]);
    return finish(estimate(v), std::exp(-n * t) * P.eval(x0));
}

CheckResult moment_check(const LevyModel& model, const std::vector<double>& samples, int n)
{
    if (n < 0)
        throw ConfigError("moment_check: n must be nonnegative");
    std::vector<double> v(samples.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::pow(samples[i], n);
    return finish(estimate(v), W_integer(model, n));
}

CheckResult eigen_check(const LevyModel& model, const PathConfig& cfg, double x0, double t, int n)
{
    if (n < 0 || n > 5)
        throw ConfigError("eigen_check: n must lie in 0..5");
    return eigen_check(model, sample_gl(model, cfg, x0, t), x0, t, n);
}

CheckResult moment_check(const LevyModel& model, const PathConfig& cfg, double x0, double t, int n)
{
    if (n < 0)
        throw ConfigError("moment_check: n must be nonnegative");
    return moment_check(model, sample_gl(model, cfg, x0, t), n);
}

} // namespace glspec
