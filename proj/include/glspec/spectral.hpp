#pragma once

#include "glspec/invariant_density.hpp"
#include "glspec/levy_model.hpp"
#include "glspec/quadrature.hpp"

#include <functional>
#include <vector>

namespace glspec {

using Poly = std::vector<double>;  // monomial coefficients, lowest degree first

struct EigenPair {
    int n = 0;
    std::vector<long double> p_coeffs;

    std::vector<double> coeffs() const;
    double eval(double x) const;
};

/// W_φ(k+1) for k = 0..kmax in extended precision.
std::vector<long double> W_integers(const LevyModel& model, int kmax);

/// 𝒫ₙ with coefficients (−1)^k C(n,k)/W_φ(k+1).
EigenPair eigen_poly(const LevyModel& model, int n);
/// Same coefficients via the perturbed three-term recurrence.
EigenPair eigen_poly_recurrence(const LevyModel& model, int n);

double poly_eval(const Poly& p, double x);

struct CoeigenValue {
    double value;
    Membership membership;
};

/// 𝒱ₙ(x) = wₙ(x)/ν(x) on (0, ρ), flagged when 𝒱ₙ ∉ L²(ν).
CoeigenValue coeigen_eval(const LevyModel& model, int n, double x);

/// Function of x and of the gap ρ − x (infinite when ρ = ∞).
using SupportFn = std::function<double(double x, double gap)>;

SupportFn as_support_fn(std::function<double(double)> f);
SupportFn poly_fn(Poly p);
SupportFn eigen_fn(const LevyModel& model, int n);
SupportFn coeigen_fn(const LevyModel& model, int n);

/// ∫₀^ρ h ν by tanh-sinh; on a finite support the dyadic shells toward ρ are
/// checked first and DivergenceDetected raised when their partial sums blow up.
QuadResult integrate_nu(const LevyModel& model, const SupportFn& h, const QuadConfig& cfg = {});
QuadResult inner_product(const LevyModel& model, const SupportFn& f, const SupportFn& g, const QuadConfig& cfg = {});

/// Partial integrals ∫₀^{ρ(1−2^{−k})} h ν for k = 1..kmax.
std::vector<double> dyadic_partials(const LevyModel& model, const SupportFn& h, int kmax);

using Matrix = std::vector<std::vector<double>>;

/// ⟨𝒫ₙ, 𝒱ₘ⟩_ν for n, m ≤ N.
Matrix gram(const LevyModel& model, int N, int threads = 0);
double max_identity_deviation(const Matrix& g);

/// Smallest time at which the spectral expansions are trusted.
double t_min(const LevyModel& model);

struct HeatValue {
    double value;
    double last_term;
};

HeatValue heat_kernel(const LevyModel& model, double t, double x, double y, int N);

/// Σ e^{−nt}⟨f,𝒱ₙ⟩𝒫ₙ(x); polynomial input uses the exact moment formula.
double semigroup_apply(const LevyModel& model, double t, const Poly& f, double x, int N);
double semigroup_apply(const LevyModel& model, double t, const std::function<double(double)>& f, double x, int N);

/// Σ e^{−nt}⟨g,𝒫ₙ⟩𝒱ₙ(y).
double adjoint_apply(const LevyModel& model, double t, const Poly& g, double y, int N);
double adjoint_apply(const LevyModel& model, double t, const std::function<double(double)>& g, double y, int N);

/// ⟨x^j, 𝒱ₙ⟩_ν and ⟨x^j, 𝒫ₙ⟩_ν by the moment formulas.
double monomial_coeigen_product(const LevyModel& model, int j, int n);
double monomial_eigen_product(const LevyModel& model, int j, int n);

struct NormRow {
    int n;
    double norm_p;
    double norm_v;  // inf when 𝒱ₙ ∉ L²(ν), NaN when undetermined
    Membership membership;
};

struct NormsReport {
    std::vector<NormRow> rows;
    double slope_v2 = 0.0;  // least-squares slope of ln‖𝒱ₙ‖² against ln n
    int fit_lo = 0;
    int fit_hi = 0;
};

NormsReport norms_report(const LevyModel& model, int N, int fit_lo = -1, int threads = 0);

struct GapResult {
    double gap;            // ‖P_t f − νf‖_ν
    double gap_quadrature; // direct quadrature cross-check
    double bound;
    double f_spread;       // ‖f − νf‖_ν
    double m_under;        // (m + Π̄̄(0⁺))/σ²
    double d_eps_plus;
    bool parseval_used;
};

GapResult equilibrium_gap(const LevyModel& model, double t, const Poly& f, int N, double eps = 1e-3);

} // namespace glspec
