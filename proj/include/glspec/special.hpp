#pragma once

#include <complex>

namespace glspec {

using cplx = std::complex<double>;

/// Log-gamma on the complex plane (Lanczos g=7, n=9 with reflection).
/// The imaginary part is a valid branch of arg Γ(z), not necessarily principal.
cplx log_gamma(cplx z);
double log_gamma(double x);
cplx gamma_fn(cplx z);
double gamma_fn(double x);

/// lnΓ(w+a) − lnΓ(w), accurate for large |w| where the direct difference cancels.
cplx log_gamma_ratio(cplx w, double a);
double log_gamma_ratio(double w, double a);

/// ψ(w+a) − ψ(w) and ψ'(w+a) − ψ'(w) for real w > 0.
double digamma_diff(double w, double a);
double trigamma_diff(double w, double a);

double digamma(double x);
double trigamma(double x);

/// log(1+x) accurate for small |x|.
cplx log1p(cplx x);

/// log C(n, k).
double log_binomial(int n, int k);

} // namespace glspec
