#include "glspec/errors.hpp"
#include "glspec/quadrature.hpp"
#include "glspec/report.hpp"
#include "glspec/spectral.hpp"
#include "glspec/weierstrass.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace glspec;

TEST_SUITE("spectral")
{
    TEST_CASE("classical eigenpolynomials are normalized Laguerre polynomials")
    {
        LevyModel c1 = preset("classical_m1");
        for (int n = 0; n <= 10; ++n)
            for (double x : {0.0, 0.4, 2.0, 7.0}) {
                double expect = std::assoc_laguerre(unsigned(n), 1u, x) / (n + 1.0);
                CHECK(eigen_poly(c1, n).eval(x) == doctest::Approx(expect).epsilon(1e-12).scale(1e-12));
            }
        // 𝒫₁(1) = 1 − 1/φ(1)
        CHECK(eigen_poly(c1, 1).eval(1.0) == doctest::Approx(0.5));
    }

    TEST_CASE("direct and recurrence coefficients agree")
    {
        for (const auto& name : preset_names()) {
            LevyModel m = preset(name);
            CAPTURE(name);
            double worst = 0.0;
            for (int n = 0; n <= 30; ++n) {
                auto a = eigen_poly(m, n), b = eigen_poly_recurrence(m, n);
                for (int k = 0; k <= n; ++k)
                    worst = std::max(worst, double(std::abs(a.p_coeffs[k] / b.p_coeffs[k] - 1.0L)));
            }
            CHECK(worst <= 1e-12);
        }
    }

    TEST_CASE("Gram matrix is the identity")
    {
        CHECK(max_identity_deviation(gram(preset("classical_m1"), 5)) < 1e-10);
        CHECK(max_identity_deviation(gram(preset("gauss_laguerre"), 4)) < 1e-9);
        CHECK_THROWS_AS(gram(preset("sawtooth"), 3), MembershipWarning);
        // the same entries on one and on several workers
        auto a = gram(preset("small_perturbation_m2"), 4, 1), b = gram(preset("small_perturbation_m2"), 4, 3);
        CHECK(a == b);
    }

    TEST_CASE("norms of the classical family")
    {
        NormsReport r = norms_report(preset("classical_m1"), 10);
        for (const auto& row : r.rows) {
            CHECK(row.norm_p == doctest::Approx(1.0 / std::sqrt(row.n + 1.0)).epsilon(1e-10));
            CHECK(row.norm_v == doctest::Approx(std::sqrt(row.n + 1.0)).epsilon(1e-10));
        }
        // least-squares slope of ln(n+1) against ln n over the fit window
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int k = 0;
        for (int n = r.fit_lo; n <= r.fit_hi; ++n, ++k) {
            double x = std::log(n), y = std::log(n + 1.0);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        CHECK(r.fit_lo == 5);
        CHECK(r.fit_hi == 10);
        CHECK(r.slope_v2 == doctest::Approx((k * sxy - sx * sy) / (k * sxx - sx * sx)).epsilon(1e-9));
    }

    TEST_CASE("co-eigenfunction norms of the small perturbation")
    {
        // Rodrigues form (xⁿν)⁽ⁿ⁾/(n!ν) squared against ν, sympy + mpmath
        NormsReport r = norms_report(preset("small_perturbation_m2"), 24, 8);
        CHECK(r.rows[1].norm_v == doctest::Approx(1.5709500986851668).epsilon(1e-9));
        CHECK(r.rows[8].norm_v == doctest::Approx(5.3993319490986486).epsilon(1e-9));
        CHECK(r.rows[24].norm_v == doctest::Approx(14.327432907925622).epsilon(1e-8));
        for (const auto& row : r.rows)
            CHECK(row.norm_p <= 1.0 + 1e-10);
    }

    TEST_CASE("first co-eigenfunction of the saw-tooth diverges")
    {
        LevyModel st = preset("sawtooth");
        CHECK_THROWS_AS(inner_product(st, coeigen_fn(st, 1), coeigen_fn(st, 1)), DivergenceDetected);
        CHECK(inner_product(st, coeigen_fn(st, 0), coeigen_fn(st, 0)).value == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(coeigen_eval(st, 1, 0.5).membership == Membership::NotInL2);
    }

    TEST_CASE("semigroup on polynomials")
    {
        LevyModel c1 = preset("classical_m1");
        // P_t x = φ(1) + (x − φ(1)) e^{−t}
        for (double t : {0.1, 1.0, 3.0})
            for (double x : {0.0, 0.5, 4.0})
                CHECK(semigroup_apply(c1, t, Poly{0.0, 1.0}, x, 10) ==
                      doctest::Approx(2.0 + (x - 2.0) * std::exp(-t)).epsilon(1e-13));
        // truncation beyond the degree adds nothing
        LevyModel sp = preset("small_perturbation_m2");
        for (int d = 1; d <= 5; ++d) {
            Poly p(std::size_t(d) + 1, 0.0);
            for (int k = 0; k <= d; ++k)
                p[std::size_t(k)] = 1.0 / (k + 1.0);
            double a = semigroup_apply(sp, 0.7, p, 1.3, d), b = semigroup_apply(sp, 0.7, p, 1.3, d + 20);
            CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }
    }

    TEST_CASE("pairing with the constant co-eigenfunction is the mean")
    {
        LevyModel sp = preset("small_perturbation_m2");
        auto f = as_support_fn([](double x) { return std::sin(x) + x * x; });
        double a = inner_product(sp, f, coeigen_fn(sp, 0)).value;
        double b = integrate_nu(sp, f).value;
        CHECK(a == doctest::Approx(b).epsilon(1e-11));
        CHECK(monomial_coeigen_product(sp, 3, 0) == doctest::Approx(W_integer(sp, 3)));
    }

    TEST_CASE("generating function identity")
    {
        // Σ 𝒫ₙ(−x) tⁿ/n! against e^t Σ (xt)^k/(k! W(k+1))
        for (const auto& name : {"classical_m1", "small_perturbation_m2", "gauss_laguerre"}) {
            LevyModel m = preset(name);
            double x = 1.0, t = 0.5;
            double lhs = 0.0, fact = 1.0;
            for (int n = 0; n <= 30; ++n) {
                if (n > 0)
                    fact *= n;
                lhs += eigen_poly(m, n).eval(-x) * std::pow(t, n) / fact;
            }
            double rhs = 0.0, kf = 1.0;
            for (int k = 0; k <= 40; ++k) {
                if (k > 0)
                    kf *= k;
                rhs += std::pow(x * t, k) / (kf * W_integer(m, k));
            }
            CHECK(lhs == doctest::Approx(std::exp(t) * rhs).epsilon(1e-8));
        }
    }

    TEST_CASE("heat kernel reproduces the eigenvalue relation")
    {
        for (const auto& name : {"classical_m1", "small_perturbation_m2"}) {
            LevyModel m = preset(name);
            double t = 0.5, x = 1.2;
            QuadConfig cfg;
            cfg.rel_tol = 1e-9;
            for (int n = 0; n <= 5; ++n) {
                EigenPair P = eigen_poly(m, n);
                double q = half_line([&](double y) { return y > 0.0 ? heat_kernel(m, t, x, y, 40).value * P.eval(y) : 0.0; },
                                     cfg)
                               .value;
                CHECK(std::abs(q - std::exp(-n * t) * P.eval(x)) <= 1e-5);
            }
        }
    }

    TEST_CASE("heat kernel needs t above the threshold")
    {
        LevyModel gl = preset("gauss_laguerre");
        CHECK(t_min(gl) == doctest::Approx(-std::log(std::sqrt(2.0) - 1.0)).epsilon(1e-12));
        CHECK(t_min(preset("classical_m1")) == 0.0);
        CHECK_THROWS_AS(heat_kernel(gl, 0.5, 1.0, 1.0, 10), TimeBelowThreshold);
        CHECK(t_min(preset("sawtooth")) > 0.0);
    }

    TEST_CASE("equilibrium gap: Parseval and quadrature agree and respect the bound")
    {
        LevyModel sp = preset("small_perturbation_m2");
        for (double t : {0.1, 1.0})
            for (const Poly& f : {Poly{0.0, 1.0}, Poly{0.0, 1.0, -1.0}}) {
                GapResult g = equilibrium_gap(sp, t, f, 40);
                CHECK(g.parseval_used);
                CHECK(g.gap == doctest::Approx(g.gap_quadrature).epsilon(1e-6));
                CHECK(g.gap <= g.bound);
                CHECK(g.m_under == doctest::Approx(2.0));
            }
        CHECK_THROWS_AS(equilibrium_gap(preset("sawtooth"), 1.0, Poly{0.0, 1.0}, 10), ClassError);
    }
}
