#pragma once

#include "glspec/levy_model.hpp"
#include "glspec/weierstrass.hpp"

#include <memory>
#include <string>

namespace glspec {

enum class DensitySource { ClosedForm, MellinInversion };

struct MellinConfig {
    double tol = 1e-14;        // relative truncation level of |W| on each line
    int derivative_cap = 20;   // polynomial degree budget in the truncation test
    int panel_nodes = 16;
    double panel_width = 1.0;
    int lines = 48;
    double b_cap = 2000.0;
};

/// Invariant density ν on (0, ρ), its derivatives and the numerators wₙ = (xⁿν)⁽ⁿ⁾/n!.
class DensityEvaluator {
public:
    /// Closed form when the model is one of the oracle families, Mellin inversion otherwise.
    static DensityEvaluator for_model(const LevyModel& model);
    static DensityEvaluator closed_form(const LevyModel& model);
    static DensityEvaluator mellin(std::shared_ptr<const SpectralContext> ctx, MellinConfig cfg = {});
    static bool has_closed_form(const LevyModel& model);

    DensitySource source() const;
    std::string family() const;
    double support_upper() const;
    const LevyModel& model() const;

    double nu(double x) const;
    /// gap = ρ − x, used near a finite right endpoint.
    double nu(double x, double gap) const;
    double nu_deriv(double x, int n) const;
    double w(int n, double x) const;
    double w(int n, double x, double gap) const;
    /// wₙ(x)/ν(x).
    double coeigen(int n, double x) const;
    double coeigen(int n, double x, double gap) const;

    struct Impl;

private:
    explicit DensityEvaluator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Shared evaluator per model, built once.
const DensityEvaluator& density_for(const LevyModel& model);

double nu(const LevyModel& model, double x);
/// Checks the global smoothness limit n ≤ N_ρ − 1 for finite-activity bounded-support models.
double nu_deriv(const LevyModel& model, double x, int n);
double w_n(const LevyModel& model, int n, double x);
double invariant_moment(const LevyModel& model, int n);

enum class Membership { InL2, NotInL2, Undetermined };
/// Whether 𝒱ₙ ∈ L²(ν): always for ρ = ∞ or Π̄(0⁺) = ∞, else n < Π̄(0⁺)/(2ρ).
Membership coeigen_membership(const LevyModel& model, int n);

} // namespace glspec
