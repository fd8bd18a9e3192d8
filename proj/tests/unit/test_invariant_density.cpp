#include "glspec/errors.hpp"
#include "glspec/invariant_density.hpp"
#include "glspec/quadrature.hpp"
#include "glspec/report.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace glspec;

TEST_SUITE("invariant_density")
{
    TEST_CASE("closed forms of the preset families")
    {
        LevyModel c1 = preset("classical_m1"), sp = preset("small_perturbation_m2");
        LevyModel st = preset("sawtooth"), gl = preset("gauss_laguerre");
        for (double x : {0.05, 0.5, 1.0, 3.0, 9.0}) {
            CHECK(nu(c1, x) == doctest::Approx(x * std::exp(-x)).epsilon(1e-13));
            CHECK(nu(sp, x) == doctest::Approx((1.0 + x) * x * std::exp(-x) / 3.0).epsilon(1e-13));
            CHECK(nu(gl, x) == doctest::Approx(x * x * std::exp(-x * x) / (0.5 * std::tgamma(1.5))).epsilon(1e-13));
        }
        // Beta(3/2, 1/2) on (0, 1)
        for (double x : {0.01, 0.5, 0.99})
            CHECK(nu(st, x) == doctest::Approx(std::sqrt(x / (1.0 - x)) * 2.0 / std::numbers::pi).epsilon(1e-13));
        CHECK(nu(st, 1.5) == 0.0);
        CHECK(density_for(st).support_upper() == 1.0);
    }

    TEST_CASE("moments equal the Weierstrass product at integers")
    {
        for (const auto& name : {"gamma", "gauss_laguerre", "sawtooth"}) {
            LevyModel m = preset(name);
            double rho = m.scalars().rho;
            for (int n = 0; n <= 5; ++n) {
                const DensityEvaluator& d = density_for(m);
                double q = rho < inf ? tanh_sinh(EndpointFn([&](double x, double g) { return std::pow(x, n) * d.nu(x, g); }),
                                                 0.0, rho)
                                           .value
                                     : half_line([&](double x) { return std::pow(x, n) * nu(m, x); }).value;
                CHECK(q == doctest::Approx(invariant_moment(m, n)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("Rodrigues numerators of the classical family are Laguerre polynomials")
    {
        LevyModel c1 = preset("classical_m1");
        for (int n = 1; n <= 6; ++n)
            for (double x : {0.2, 1.0, 4.5}) {
                double expect = x * std::exp(-x) * std::assoc_laguerre(unsigned(n), 1u, x);
                CHECK(w_n(c1, n, x) == doctest::Approx(expect).epsilon(1e-11).scale(1e-12));
            }
        CHECK(nu_deriv(c1, 2.0, 1) == doctest::Approx(-std::exp(-2.0)).epsilon(1e-12));
    }

    TEST_CASE("Mellin inversion reproduces the closed forms")
    {
        for (const auto& name : {"classical_m1", "small_perturbation_m2"}) {
            LevyModel m = preset(name);
            auto mel = DensityEvaluator::mellin(std::make_shared<SpectralContext>(m));
            auto closed = DensityEvaluator::closed_form(m);
            CHECK(mel.source() == DensitySource::MellinInversion);
            for (double x : {0.1, 0.7, 2.0, 5.0}) {
                CHECK(std::abs(mel.nu(x) - closed.nu(x)) < 1e-10);
                CHECK(std::abs(mel.w(2, x) - closed.w(2, x)) < 1e-9);
            }
        }
    }

    TEST_CASE("mixture family uses Mellin inversion and integrates to one")
    {
        LevyModel m = preset("mixture");
        CHECK_FALSE(DensityEvaluator::has_closed_form(m));
        CHECK(density_for(m).source() == DensitySource::MellinInversion);
        QuadConfig cfg;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-11;
        CHECK(half_line([&](double x) { return nu(m, x); }, cfg).value == doctest::Approx(1.0).epsilon(1e-8));
        // near zero ν behaves like x^{−d_φ}
        double d = m.scalars().d_phi;
        double r = nu(m, 2e-8) / nu(m, 1e-8);
        CHECK(r == doctest::Approx(std::pow(2.0, -d)).epsilon(1e-5));
    }

    TEST_CASE("membership of co-eigenfunctions")
    {
        LevyModel st = preset("sawtooth");
        CHECK(coeigen_membership(st, 0) == Membership::InL2);
        CHECK(coeigen_membership(st, 1) == Membership::NotInL2);
        // Π̄(0⁺)/(2ρ) = 1 exactly
        LevyModel edge(0.0, 0.0, ExpMixture{{{4.0, 2.0}}});
        CHECK(coeigen_membership(edge, 0) == Membership::InL2);
        CHECK(coeigen_membership(edge, 1) == Membership::Undetermined);
        CHECK(coeigen_membership(preset("classical_m1"), 40) == Membership::InL2);
    }

    TEST_CASE("smoothness limit on bounded support")
    {
        LevyModel st = preset("sawtooth");
        CHECK_THROWS_AS(nu_deriv(st, 0.5, 1), SmoothnessError);
        CHECK(nu_deriv(st, 0.5, 0) == doctest::Approx(nu(st, 0.5)));
        // Π̄(0⁺)/ρ ≈ 4.8 allows derivatives up to order 3
        LevyModel smooth(0.0, 0.01, ExpMixture{{{5.0, 5.0}}});
        CHECK(smooth.scalars().n_rho.value == 4);
        CHECK_NOTHROW(nu_deriv(smooth, 0.1, 3));
        CHECK_THROWS_AS(nu_deriv(smooth, 0.1, 4), SmoothnessError);
        double h = 1e-6;
        CHECK(nu_deriv(smooth, 0.1, 1) ==
              doctest::Approx((nu(smooth, 0.1 + h) - nu(smooth, 0.1 - h)) / (2 * h)).epsilon(1e-6));
    }
}
