#include "glspec/errors.hpp"
#include "glspec/montecarlo.hpp"
#include "glspec/report.hpp"
#include "glspec/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace glspec;

TEST_SUITE("montecarlo")
{
    TEST_CASE("Philox4x32-10 known-answer vectors")
    {
        using A = std::array<std::uint32_t, 4>;
        CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are keyed by seed and path")
    {
        PathStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
        bool differ_c = false, differ_d = false;
        for (int i = 0; i < 100; ++i) {
            double u = a.uniform();
            CHECK(u == b.uniform());
            CHECK(u > 0.0);
            CHECK(u < 1.0);
            differ_c |= u != c.uniform();
            differ_d |= u != d.uniform();
        }
        CHECK(differ_c);
        CHECK(differ_d);
    }

    TEST_CASE("pairwise estimate")
    {
        std::vector<double> v{1.0, 2.0, 3.0, 4.0};
        MCEstimate e = estimate(v);
        CHECK(e.mean == 2.5);
        CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
        CHECK(e.n_paths == 4);
    }

    TEST_CASE("increments of the Levy process")
    {
        PathConfig cfg;
        cfg.n_paths = 40000;
        cfg.seed = 11;
        cfg.dt = 1e-2;
        // Var ξ₁ = 2σ² for pure Brownian motion
        auto xi = sample_xi(LevyModel(1.0, 0.0, EmptyJumps{}), cfg, 1.0);
        std::vector<double> sq(xi.size());
        for (size_t i = 0; i < xi.size(); ++i)
            sq[i] = xi[i] * xi[i];
        MCEstimate var = estimate(sq);
        CHECK(std::abs(var.mean - 2.0) <= 3.0 * var.std_error);
        // E ξ₁ = m
        MCEstimate mean = estimate(sample_xi(preset("classical_m1"), cfg, 1.0));
        CHECK(std::abs(mean.mean - 1.0) <= 3.0 * mean.std_error);
        // E e^{uξ₁} = e^{ψ(u)} with jumps
        LevyModel jm(1.0, 0.0, ExpMixture{{{0.5, 1.0}}});
        auto x2 = sample_xi(jm, cfg, 1.0);
        for (double& v : x2)
            v = std::exp(0.5 * v);
        MCEstimate mg = estimate(x2);
        CHECK(std::abs(mg.mean - std::exp(jm.psi(0.5))) <= 3.0 * mg.std_error);
        // martingale drift with jumps
        for (double t : {0.5, 1.0}) {
            auto y = sample_xi(preset("small_perturbation_m2"), cfg, t);
            for (double& v : y)
                v -= 1.5 * t;
            MCEstimate e = estimate(y);
            CHECK(std::abs(e.mean) <= 3.0 * e.std_error);
        }
    }

    TEST_CASE("paths do not depend on the worker count")
    {
        PathConfig cfg;
        cfg.n_paths = 3000;
        cfg.seed = 5;
        cfg.threads = 1;
        auto a = sample_gl(preset("small_perturbation_m2"), cfg, 1.0, 0.5);
        cfg.threads = 4;
        auto b = sample_gl(preset("small_perturbation_m2"), cfg, 1.0, 0.5);
        REQUIRE(a.size() == b.size());
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
        auto p = simulate_xi(preset("classical_m1"), [] {
            PathConfig c;
            c.horizon = 1.0;
            c.seed = 5;
            return c;
        }(), 17);
        CHECK(p.size() == 1001);
        CHECK(p[0] == 0.0);
    }

    TEST_CASE("gL samples follow the semigroup")
    {
        LevyModel c1 = preset("classical_m1");
        PathConfig cfg;
        cfg.n_paths = 20000;
        cfg.seed = 3;
        // small time stays near x0
        MCEstimate e = estimate(sample_gl(c1, cfg, 1.5, 0.01));
        CHECK(std::abs(e.mean - semigroup_apply(c1, 0.01, Poly{0.0, 1.0}, 1.5, 2)) <= 3.0 * e.std_error + 0.01);
        // E X_1 from a point near the origin
        double x0 = 1e-3;
        MCEstimate m = estimate(sample_gl(c1, cfg, x0, 1.0));
        CHECK(std::abs(m.mean - (x0 * std::exp(-1.0) + 2.0 * (1.0 - std::exp(-1.0)))) <= 3.0 * m.std_error);
        CheckResult r = eigen_check(c1, cfg, 1.0, 0.5, 1);
        CHECK(r.target == doctest::Approx(std::exp(-0.5) * 0.5));
        CHECK(std::abs(r.z) <= 3.0);
        CheckResult r0 = eigen_check(c1, cfg, 1.0, 0.5, 0);
        CHECK(r0.estimate.mean == 1.0);
        CHECK(r0.z == 0.0);
    }

    TEST_CASE("halving dt moves the eigen estimate by less than the noise")
    {
        LevyModel c1 = preset("classical_m1");
        PathConfig cfg;
        cfg.n_paths = 20000;
        cfg.seed = 21;
        cfg.dt = 2e-3;
        CheckResult coarse = eigen_check(c1, cfg, 1.0, 0.5, 2);
        cfg.dt = 1e-3;
        CheckResult fine = eigen_check(c1, cfg, 1.0, 0.5, 2);
        CHECK(std::abs(coarse.estimate.mean - fine.estimate.mean) < fine.estimate.std_error);
    }

    TEST_CASE("configuration errors")
    {
        LevyModel c1 = preset("classical_m1");
        PathConfig cfg;
        cfg.n_paths = 10;
        CHECK_THROWS_AS(sample_gl(c1, cfg, 0.0, 1.0), ConfigError);
        cfg.dt = 0.0;
        CHECK_THROWS_AS(sample_gl(c1, cfg, 1.0, 1.0), ConfigError);
        cfg.dt = 1e-3;
        cfg.horizon = 0.01;
        CHECK_THROWS_AS(sample_gl(c1, cfg, 1.0, 5.0), HorizonError);
        CHECK_THROWS_AS(sample_gl(preset("gauss_laguerre"), PathConfig{}, 1.0, 1.0), UnsupportedJumpsError);
        CHECK_THROWS_AS(eigen_check(c1, cfg, 1.0, 1.0, 6), ConfigError);
    }

    TEST_CASE("truncated Gauss-Laguerre jumps")
    {
        LevyModel gl = preset("gauss_laguerre");
        PathConfig cfg;
        cfg.n_paths = 4000;
        cfg.seed = 9;
        cfg.dt = 2e-3;
        cfg.truncate_eps = 0.02;
        TruncationInfo ti = truncation_info(gl, cfg);
        CHECK(ti.truncated);
        CHECK(ti.rate == doctest::Approx(gl.pibar(0.02)));
        CHECK(ti.dropped_variance > 0.0);
        // Π̄(y) ~ y^{−1−α} near 0, so the dropped variance scales as eps^{1−α}
        PathConfig small = cfg;
        small.truncate_eps = cfg.truncate_eps / 16.0;
        CHECK(ti.dropped_variance / truncation_info(gl, small).dropped_variance == doctest::Approx(4.0).epsilon(0.05));
        // E X_t = W(2) + (x0 − W(2)) e^{−t}, loose because of the truncation bias
        double t = 1.0, x0 = 1.0;
        MCEstimate e = estimate(sample_gl(gl, cfg, x0, t));
        double target = gl.phi(1.0) + (x0 - gl.phi(1.0)) * std::exp(-t);
        CHECK(std::abs(e.mean - target) <= 4.0 * e.std_error + 0.02);
    }
}
