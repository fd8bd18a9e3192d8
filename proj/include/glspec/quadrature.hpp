#pragma once

#include <functional>
#include <vector>

namespace glspec {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evals = 0;
};

struct QuadConfig {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_level = 12;
};

/// Integrand receiving x and b − x, so endpoint singularities at b can be
/// evaluated without cancellation.
using EndpointFn = std::function<double(double x, double gap_to_b)>;
using RealFn = std::function<double(double)>;

/// Tanh-sinh on (a, b).
QuadResult tanh_sinh(const EndpointFn& f, double a, double b, const QuadConfig& cfg = {});
QuadResult tanh_sinh(const RealFn& f, double a, double b, const QuadConfig& cfg = {});

/// ∫_0^∞ f via x = s/(1−s) and tanh-sinh on (0,1).
QuadResult half_line(const RealFn& f, const QuadConfig& cfg = {});

/// Adaptive Gauss–Kronrod 7/15 on [a, b].
QuadResult gauss_kronrod(const RealFn& f, double a, double b, double rel_tol, double abs_tol,
                         int max_intervals = 4000);

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

} // namespace glspec
