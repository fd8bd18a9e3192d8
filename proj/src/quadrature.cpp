#include "glspec/quadrature.hpp"

#include "glspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

namespace glspec {

namespace {

constexpr double ts_t_max = 6.2;

struct TsNode {
    double shift;   // tanh(π/2 sinh t), in [0, 1)
    double gap;     // 1 − tanh(π/2 sinh t), computed directly
    double weight;  // π/2 cosh t / cosh²(π/2 sinh t)
};

TsNode ts_node(double t)
{
    const double hp = std::numbers::pi / 2.0;
    double s = hp * std::sinh(t);
    double e = std::exp(-2.0 * s);
    TsNode n;
    n.gap = 2.0 * e / (1.0 + e);
    n.shift = (1.0 - e) / (1.0 + e);
    double ch = 2.0 * std::exp(-s) / (1.0 + e); // 1/cosh(s)
    n.weight = hp * std::cosh(t) * ch * ch;
    return n;
}

} // namespace

QuadResult tanh_sinh(const EndpointFn& f, double a, double b, const QuadConfig& cfg)
{
    const double r = 0.5 * (b - a);
    QuadResult res;
    auto eval = [&](double t) {
        TsNode n = ts_node(std::abs(t));
        double x, gap;
        if (t >= 0.0) {
            gap = r * n.gap;
            x = b - gap;
        } else {
            x = a + r * n.gap;
            gap = (b - a) - r * n.gap;
        }
        if (n.weight == 0.0)
            return 0.0;
        double v = f(x, gap);
        ++res.evals;
        if (!std::isfinite(v)) {
            if (std::abs(t) > 3.0)
                return 0.0;
            throw QuadratureError("tanh_sinh: non-finite integrand at x = " + std::to_string(x));
        }
        return v * n.weight;
    };

    double l1 = 0.0;
    // sum over one side until the contributions die out
    auto side_sum = [&](double h, double start, int stride, double scale) {
        double s = 0.0;
        int small = 0;
        for (int k = 0;; ++k) {
            double t = start + k * stride * h;
            if (t > ts_t_max)
                break;
            double vp = eval(t), vm = eval(-t);
            s += vp + vm;
            l1 += std::abs(vp) + std::abs(vm);
            if (std::abs(vp) + std::abs(vm) <= 1e-18 * scale)
                ++small;
            else
                small = 0;
            if (small >= 4 && t > 1.0)
                break;
        }
        return s;
    };

    double h = 1.0;
    double sum = eval(0.0);
    l1 = std::abs(sum);
    sum += side_sum(h, h, 1, std::abs(sum) + 1e-300);
    double est = h * sum * r, prev = est;
    for (int level = 1; level <= cfg.max_level; ++level) {
        h *= 0.5;
        sum += side_sum(h, h, 2, std::abs(sum) + 1e-300);
        est = h * sum * r;
        double err = std::abs(est - prev);
        // cancellation floor: roundoff relative to the absolute mass
        double floor = 64.0 * std::numeric_limits<double>::epsilon() * h * l1 * std::abs(r);
        if (level >= 3 && err <= std::max({cfg.abs_tol, cfg.rel_tol * std::abs(est), floor})) {
            res.value = est;
            res.error = err;
            return res;
        }
        prev = est;
        res.error = err;
    }
    res.value = est;
    double floor = 64.0 * std::numeric_limits<double>::epsilon() * h * l1 * std::abs(r);
    if (res.error > std::max({cfg.abs_tol, 1e3 * cfg.rel_tol * std::abs(est), floor}))
        { char buf[160]; std::snprintf(buf, sizeof buf, "tanh_sinh: no convergence, difference %.3g, estimate %.3g, mass %.3g", res.error, est, h * l1 * std::abs(r)); throw QuadratureError(buf); }
    return res;
}

QuadResult tanh_sinh(const RealFn& f, double a, double b, const QuadConfig& cfg)
{
    return tanh_sinh(EndpointFn([&](double x, double) { return f(x); }), a, b, cfg);
}

QuadResult half_line(const RealFn& f, const QuadConfig& cfg)
{
    auto g = [&](double s, double gap) {
        if (gap <= 0.0)
            return 0.0;
        double x = s / gap;
        if (!std::isfinite(x))
            return 0.0;
        double v = f(x);
        if (v == 0.0)
            return 0.0;
        return v / (gap * gap);
    };
    return tanh_sinh(EndpointFn(g), 0.0, 1.0, cfg);
}

namespace {

constexpr double gk_xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                             0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                             0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                             0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double gk_wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                             0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                             0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                             0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double gk_wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                             0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFn& f, double a, double b)
{
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * gk_wk[7], rg = fc * gk_wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * gk_xk[j];
        double f1 = f(c - dx), f2 = f(c + dx);
        rk += gk_wk[j] * (f1 + f2);
        if (j % 2 == 1)
            rg += gk_wg[j / 2] * (f1 + f2);
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

} // namespace

QuadResult gauss_kronrod(const RealFn& f, double a, double b, double rel_tol, double abs_tol,
                         int max_intervals)
{
    std::priority_queue<Segment> heap;
    Segment s0 = gk15(f, a, b);
    heap.push(s0);
    double total = s0.value, err = s0.error;
    int evals = 15;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (int(heap.size()) >= max_intervals)
            throw QuadratureError("gauss_kronrod: interval budget exhausted, error " + std::to_string(err));
        Segment s = heap.top();
        heap.pop();
        double m = 0.5 * (s.a + s.b);
        Segment l = gk15(f, s.a, m), r = gk15(f, m, s.b);
        evals += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        if (err < 0.0)
            err = 0.0;
    }
    // recompute the sum from the pieces to drop accumulated rounding
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {v, e, evals};
}

const GaussLegendre& gauss_legendre(int n)
{
    static std::mutex mtx;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        gl.nodes[i] = x;
        gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(gl)).first->second;
}

} // namespace glspec
