#include "glspec/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace glspec {

namespace {

constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_p = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} / (2k (2k-1)) for k = 1..8
constexpr std::array<double, 8> stirling_c = {
    1.0 / 12.0,        -1.0 / 360.0,       1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0,  1.0 / 156.0,         -3617.0 / 122400.0};

// B_{2k} for k = 1..8
constexpr std::array<double, 8> bernoulli = {
    1.0 / 6.0,  -1.0 / 30.0,   1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);

cplx lanczos_log_gamma(cplx z)
{
    z -= 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i)
        x += lanczos_p[i] / (z + double(i));
    cplx t = z + lanczos_g + 0.5;
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) without overflow for large |Im z|
cplx log_sin_pi(cplx z)
{
    const double pi = std::numbers::pi;
    if (std::abs(z.imag()) < 20.0)
        return std::log(std::sin(pi * z));
    bool flip = z.imag() < 0.0;
    cplx w = flip ? std::conj(z) : z;
    const cplx i(0.0, 1.0);
    cplx r = cplx(-std::log(2.0), pi / 2.0) - i * pi * w
             + log1p(-std::exp(2.0 * i * pi * w));
    return flip ? std::conj(r) : r;
}

} // namespace

cplx log1p(cplx x)
{
    double re = 0.5 * std::log1p(2.0 * x.real() + std::norm(x));
    double im = std::atan2(x.imag(), 1.0 + x.real());
    return {re, im};
}

cplx log_gamma(cplx z)
{
    if (z.real() < 0.5) {
        const double pi = std::numbers::pi;
        return std::log(pi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

double log_gamma(double x)
{
    return log_gamma(cplx(x, 0.0)).real();
}

cplx gamma_fn(cplx z)
{
    return std::exp(log_gamma(z));
}

double gamma_fn(double x)
{
    if (x < 0.5) {
        const double pi = std::numbers::pi;
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    return std::exp(lanczos_log_gamma(cplx(x, 0.0)).real());
}

cplx log_gamma_ratio(cplx w, double a)
{
    cplx shift_sum = 0.0;
    while ((w.real() < 15.0 && std::abs(w.imag()) < 15.0) || w.real() < 0.0) {
        shift_sum += log1p(a / w);
        w += 1.0;
    }
    cplx u = w + a;
    cplx s = (u - 0.5) * log1p(a / w) + a * std::log(w) - a;
    cplx iu = 1.0 / u, iv = 1.0 / w;
    cplx iu2 = iu * iu, iv2 = iv * iv;
    cplx pu = iu, pv = iv;
    for (double c : stirling_c) {
        s += c * (pu - pv);
        pu *= iu2;
        pv *= iv2;
    }
    return s - shift_sum;
}

double log_gamma_ratio(double w, double a)
{
    return log_gamma_ratio(cplx(w, 0.0), a).real();
}

double digamma(double x)
{
    double acc = 0.0;
    while (x < 15.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double ix2 = 1.0 / (x * x), p = ix2;
    double s = std::log(x) - 0.5 / x;
    for (int k = 0; k < 8; ++k) {
        s -= bernoulli[k] / (2.0 * (k + 1)) * p;
        p *= ix2;
    }
    return s + acc;
}

double trigamma(double x)
{
    double acc = 0.0;
    while (x < 15.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    double ix = 1.0 / x, ix2 = ix * ix, p = ix2 * ix;
    double s = ix + 0.5 * ix2;
    for (int k = 0; k < 8; ++k) {
        s += bernoulli[k] * p;
        p *= ix2;
    }
    return s + acc;
}

double digamma_diff(double w, double a)
{
    double acc = 0.0;
    while (w < 15.0) {
        acc += 1.0 / w - 1.0 / (w + a);
        w += 1.0;
    }
    double u = w + a;
    double s = std::log1p(a / w) - 0.5 / u + 0.5 / w;
    double iu2 = 1.0 / (u * u), iv2 = 1.0 / (w * w);
    double pu = iu2, pv = iv2;
    for (int k = 0; k < 8; ++k) {
        s -= bernoulli[k] / (2.0 * (k + 1)) * (pu - pv);
        pu *= iu2;
        pv *= iv2;
    }
    return s + acc;
}

double trigamma_diff(double w, double a)
{
    double acc = 0.0;
    while (w < 15.0) {
        acc += 1.0 / ((w + a) * (w + a)) - 1.0 / (w * w);
        w += 1.0;
    }
    double u = w + a;
    // 1/u - 1/w = -a/(u w)
    double s = -a / (u * w) + 0.5 * (1.0 / (u * u) - 1.0 / (w * w));
    double iu2 = 1.0 / (u * u), iv2 = 1.0 / (w * w);
    double pu = iu2 / u, pv = iv2 / w;
    for (int k = 0; k < 8; ++k) {
        s += bernoulli[k] * (pu - pv);
        pu *= iu2;
        pv *= iv2;
    }
    return s + acc;
}

double log_binomial(int n, int k)
{
    return log_gamma(double(n + 1)) - log_gamma(double(k + 1)) - log_gamma(double(n - k + 1));
}

} // namespace glspec
