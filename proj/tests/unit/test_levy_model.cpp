#include "glspec/errors.hpp"
#include "glspec/levy_model.hpp"
#include "glspec/model_json.hpp"
#include "glspec/quadrature.hpp"
#include "glspec/report.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace glspec;

TEST_SUITE("levy_model")
{
    TEST_CASE("small perturbation family has the rational Bernstein function")
    {
        for (double mf : {1.0, 2.0, 3.5}) {
            LevyModel m(1.0, (mf * mf - 1.0) / mf, ExpMixture{{{mf, mf}}});
            for (double u : {0.3, 1.0, 4.0, 25.0})
                CHECK(m.phi(u) == doctest::Approx((u + mf + 1.0) * (u + mf - 1.0) / (u + mf)).epsilon(1e-14));
        }
    }

    TEST_CASE("exponential mixture matches its Levy-Khintchine integral")
    {
        LevyModel m(0.3, 0.2, ExpMixture{{{1.0, 2.0}, {0.5, 0.7}}});
        for (double u : {0.5, 2.0, 9.0}) {
            // ∫(1 − e^{−uy}) Π̄(y) dy with Π̄(y) = Σ (c/b) e^{−by}
            double jump = half_line([&](double y) {
                              return -std::expm1(-u * y) * (1.0 / 2.0 * std::exp(-2.0 * y) + 0.5 / 0.7 * std::exp(-0.7 * y));
                          }).value;
            CHECK(m.phi(u) == doctest::Approx(0.2 + 0.3 * u + jump).epsilon(1e-11));
        }
    }

    TEST_CASE("Gauss-Laguerre kernel is a gamma ratio")
    {
        LevyModel m(0.0, 0.0, GaussLaguerreKernel{0.5, 1.0});
        for (double u : {0.5, 3.0, 12.0})
            CHECK(m.phi(u) == doctest::Approx(std::tgamma(0.5 * u + 1.5) / std::tgamma(0.5 * u + 1.0)).epsilon(1e-13));
        // mpmath
        CHECK(m.phi(0.5) == doctest::Approx(1.0139673601009271).epsilon(1e-14));
        double u = 2.0;
        double jump = half_line([&](double y) { return y > 0.0 ? -std::expm1(-u * y) * m.pibar(y) : 0.0; }).value;
        CHECK(m.phi(u) == doctest::Approx(m.kernel_drift() + jump).epsilon(1e-9));
    }

    TEST_CASE("psi is u times phi and phi is Bernstein")
    {
        for (const auto& name : preset_names()) {
            LevyModel m = preset(name);
            CAPTURE(name);
            for (double u : {0.1, 1.0, 5.0}) {
                CHECK(m.psi(u) == doctest::Approx(u * m.phi(u)).epsilon(1e-15));
                CHECK(m.phi_derivative(u, 1) > 0.0);
                CHECK(m.phi_derivative(u, 2) <= 0.0);
                double h = 1e-5;
                CHECK(m.phi_derivative(u, 1) == doctest::Approx((m.phi(u + h) - m.phi(u - h)) / (2 * h)).epsilon(1e-7));
            }
        }
    }

    TEST_CASE("derived scalars of the presets")
    {
        auto st = preset("sawtooth").scalars();
        CHECK(st.rho == doctest::Approx(1.0));
        CHECK_FALSE(st.n_rho.infinite);
        CHECK(st.n_rho.value == 0);
        CHECK(st.d_phi == doctest::Approx(-0.5).epsilon(1e-10));
        CHECK(st.flags.n_inf_c);

        auto sp = preset("small_perturbation_m2").scalars();
        CHECK(sp.rho == inf);
        CHECK(sp.d_phi == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(sp.pibarbar0 == doctest::Approx(0.5));
        CHECK(sp.flags.n_p);

        auto gl = preset("gauss_laguerre").scalars();
        CHECK(gl.d_phi == doctest::Approx(-2.0).epsilon(1e-9));
        CHECK(gl.flags.n_alpha);
        CHECK(gl.flags.c_alpha == doctest::Approx(std::sqrt(0.5)));

        CHECK(preset("classical_m1").scalars().d_phi == -1.0);
        CHECK(preset("gamma").scalars().d_phi == 0.0);
    }

    TEST_CASE("invalid triplets are rejected")
    {
        CHECK_THROWS_AS(LevyModel(-1.0, 0.0, EmptyJumps{}), DomainError);
        CHECK_THROWS_AS(LevyModel(0.0, 1.0, EmptyJumps{}), DomainError);
        CHECK_THROWS_AS(LevyModel(1.0, 0.0, ExpMixture{{{1.0, -1.0}}}), DomainError);
        CHECK_THROWS_AS(LevyModel(0.0, 0.0, GaussLaguerreKernel{1.5, 1.0}), DomainError);
        CHECK_THROWS_AS(preset("classical_m1").phi(cplx(-1.5, 0.0)), DomainError);
    }

    TEST_CASE("Theta for the identity Bernstein function")
    {
        LevyModel g(1.0, 0.0, EmptyJumps{});
        // ½(π − ln 2 − π/2)
        CHECK(theta_phi(g, 1.0, 1.0) == doctest::Approx(0.43882457311747565).epsilon(1e-8));
    }

    TEST_CASE("JSON round trip and error paths")
    {
        for (const auto& name : preset_names()) {
            LevyModel m = preset(name);
            LevyModel back = model_from_json(model_to_json(m));
            CHECK(back.phi(1.7) == m.phi(1.7));
            LevyModel file = load_model(std::string(GLSPEC_SOURCE_DIR) + "/presets/" + name + ".json");
            CHECK(file.phi(2.3) == m.phi(2.3));
            CHECK(file.sigma2() == m.sigma2());
        }
        auto msg = [](const std::string& text) {
            try {
                parse_model(text);
            } catch (const ParseError& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(msg(R"({"sigma2": 1, "m": 0, "jumps": {"kind": "exp_mixture", "components": [{"c": 1, "b": 1}, {"c": 1, "b": -2}]}})")
                  .find("jumps.components[1].b") != std::string::npos);
        CHECK(msg(R"({"m": 0})").find("sigma2") != std::string::npos);
        CHECK(msg(R"({"sigma2": 1, "m": 0, "jumps": {"kind": "stable"}})").find("jumps.kind") != std::string::npos);
        CHECK(msg("{not json").find("invalid JSON") != std::string::npos);
        auto sj = scalars_to_json(preset("small_perturbation_m2").scalars());
        CHECK(sj["rho"] == "inf");
    }
}
