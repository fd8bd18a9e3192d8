#pragma once

#include "glspec/special.hpp"

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace glspec {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct EmptyJumps {};

struct ExpComponent {
    double c;
    double b;
};

/// Π(dy) = Σ c_i e^{−b_i y} dy.
struct ExpMixture {
    std::vector<ExpComponent> components;
};

/// Jump measure whose Bernstein function is Γ(αu+α𝔪+1)/Γ(αu+α𝔪+1−α).
struct GaussLaguerreKernel {
    double alpha;
    double mfrak;
};

using JumpFamily = std::variant<EmptyJumps, ExpMixture, GaussLaguerreKernel>;

struct ExtendedCount {
    bool infinite = false;
    long value = 0;
};

struct ClassFlags {
    bool n_p = false;
    bool n_inf = false;
    bool n_inf_c = false;
    bool n_alpha = false;
    double alpha = 0.0;
    double c_alpha = 0.0;
};

struct ModelScalars {
    double rho = inf;
    ExtendedCount n_rho;
    double d_phi = 0.0;
    ClassFlags flags;
    double pibar0 = 0.0;     // Π̄(0⁺)
    double pibarbar0 = 0.0;  // Π̄̄(0⁺)
};

class LevyModel {
public:
    LevyModel(double sigma2, double m, JumpFamily jumps);

    double sigma2() const { return sigma2_; }
    double m() const { return m_; }
    const JumpFamily& jumps() const { return jumps_; }

    /// Diffusion coefficient with the α = 1 kernel folded in.
    double effective_sigma2() const;

    cplx phi(cplx z) const;
    double phi(double u) const;
    cplx psi(cplx z) const;
    double psi(double u) const;
    double phi_derivative(double u, int order) const;

    /// ln φ without the half-plane check; callers guarantee Re z > d_φ.
    cplx log_phi_unchecked(cplx z) const;
    double log_phi_unchecked(double u) const;
    cplx phi_unchecked(cplx z) const;

    /// Tail Π̄(y) and its integral Π̄̄(y), y > 0.
    double pibar(double y) const;
    double pibarbar(double y) const;

    /// Drift of the kernel part (φ^R(0) for the Gauss–Laguerre kernel, zero otherwise).
    double kernel_drift() const;

    /// Left edge of the analyticity strip of φ (a pole or −∞).
    double analytic_edge() const;

    const ModelScalars& scalars() const { return scalars_; }

    bool is_empty() const { return std::holds_alternative<EmptyJumps>(jumps_); }
    bool is_exp_mixture() const { return std::holds_alternative<ExpMixture>(jumps_); }
    bool is_gauss_laguerre() const { return std::holds_alternative<GaussLaguerreKernel>(jumps_); }

private:
    void check_domain(cplx z) const;
    ModelScalars compute_scalars() const;

    double sigma2_;
    double m_;
    JumpFamily jumps_;
    ModelScalars scalars_;
};

cplx phi_eval(const LevyModel& model, cplx z);
cplx psi_eval(const LevyModel& model, cplx z);
double phi_derivative(const LevyModel& model, double u, int order);
ModelScalars derive_scalars(const LevyModel& model);

/// Θ_φ(a,b) = ∫_{a/b}^∞ ln(|φ(bu+ib)|/φ(bu)) du.
double theta_phi(const LevyModel& model, double a, double b, double quad_tol = 1e-9);

std::string describe(const LevyModel& model);

} // namespace glspec
