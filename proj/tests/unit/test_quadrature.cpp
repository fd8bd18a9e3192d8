#include "glspec/errors.hpp"
#include "glspec/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace glspec;

TEST_SUITE("quadrature")
{
    TEST_CASE("tanh-sinh handles endpoint singularities")
    {
        CHECK(tanh_sinh(RealFn([](double x) { return 1.0 / std::sqrt(x); }), 0.0, 1.0).value ==
              doctest::Approx(2.0).epsilon(1e-12));
        CHECK(tanh_sinh(RealFn([](double x) { return std::log(x); }), 0.0, 1.0).value ==
              doctest::Approx(-1.0).epsilon(1e-12));
        // (1−x)^{−1/2} through the gap argument
        auto r = tanh_sinh(EndpointFn([](double, double gap) { return 1.0 / std::sqrt(gap); }), 0.0, 1.0);
        CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    }

    TEST_CASE("half-line integrals")
    {
        CHECK(half_line([](double x) { return std::exp(-x); }).value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(half_line([](double x) { return std::pow(x, 2.5) * std::exp(-x); }).value ==
              doctest::Approx(std::tgamma(3.5)).epsilon(1e-11));
        CHECK(half_line([](double x) { return 1.0 / (1.0 + x * x); }).value ==
              doctest::Approx(std::numbers::pi / 2).epsilon(1e-11));
    }

    TEST_CASE("Gauss-Kronrod on oscillatory and peaked integrands")
    {
        auto r = gauss_kronrod([](double x) { return std::sin(20.0 * x); }, 0.0, std::numbers::pi, 1e-12, 1e-14);
        CHECK(std::abs(r.value) < 1e-12);
        auto p = gauss_kronrod([](double x) { return 1e-2 / (1e-4 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0, 1e-12, 0.0);
        CHECK(p.value == doctest::Approx(std::atan(70.0) + std::atan(30.0)).epsilon(1e-11));
    }

    TEST_CASE("Gauss-Legendre is exact to degree 2n-1")
    {
        const auto& g = gauss_legendre(16);
        REQUIRE(g.nodes.size() == 16);
        for (int d = 0; d <= 31; ++d) {
            double s = 0.0;
            for (size_t i = 0; i < g.nodes.size(); ++i)
                s += g.weights[i] * std::pow(g.nodes[i], d);
            double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }

    TEST_CASE("non-convergence is reported")
    {
        QuadConfig cfg;
        cfg.max_level = 3;
        CHECK_THROWS_AS(tanh_sinh(RealFn([](double x) { return std::sin(1.0 / x) / x; }), 0.0, 1.0, cfg),
                        QuadratureError);
    }
}
