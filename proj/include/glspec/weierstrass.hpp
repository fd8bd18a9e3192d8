#pragma once

#include "glspec/levy_model.hpp"

#include <vector>

namespace glspec {

struct SpectralConfig {
    long product_terms_cap = 1000000;
    double tol = 1e-10;
    double contour_a = 1.0;
    long warm_terms = 1L << 16;
};

/// Cached evaluator of W_φ and related constants for one model.
class SpectralContext {
public:
    explicit SpectralContext(LevyModel model, SpectralConfig cfg = {});

    const LevyModel& model() const { return model_; }
    const SpectralConfig& config() const { return cfg_; }
    const ModelScalars& scalars() const { return model_.scalars(); }

    double ln_phi_k(long k) const;

    cplx log_W(cplx z) const;
    double log_W(double u) const;
    cplx W(cplx z) const;

    /// Relative residual |W(z+1) − φ(z)W(z)| / |W(z+1)|.
    double functional_residual(cplx z) const;

    double gamma_phi() const;

private:
    template <class T>
    T telescoped(T z) const;

    LevyModel model_;
    SpectralConfig cfg_;
    std::vector<double> ln_phi_;
};

double gamma_phi(const SpectralContext& ctx);
cplx log_W(const SpectralContext& ctx, cplx z);
cplx mellin_V(const SpectralContext& ctx, cplx z);
cplx mellin_I(const SpectralContext& ctx, cplx z);

/// W_φ(n+1) = φ(1)···φ(n).
double W_integer(const LevyModel& model, int n);

/// G(u) = ∫_1^u ln φ(r) dr.
double asymp_G(const SpectralContext& ctx, double u);

/// Envelope bound on |W_φ(a+iB)| from the complex-line estimate.
double contour_envelope(const SpectralContext& ctx, double a, double B);

/// Smallest height B with envelope ≤ tol, by doubling then bisection.
double contour_truncation(const SpectralContext& ctx, double a, double tol);

} // namespace glspec
