#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "gravidec/errors.hpp"
#include "gravidec/quadrature.hpp"

using namespace gravidec;

namespace {

struct KnownIntegral {
    const char* name;
    Integrand1D f;
    double a, b;
    double exact;
    double max_width;
};

std::vector<KnownIntegral> known_integrals() {
    const double pi = std::numbers::pi;
    return {
        {"sin on [0,pi]", [](double y) { return std::sin(y); }, 0.0, pi, 2.0, INFINITY},
        {"constant", [](double) { return 1.0; }, 0.0, 1.0, 1.0, INFINITY},
        {"degree 7 monomial", [](double y) { return std::pow(y, 7); }, 0.0, 1.0, 0.125, INFINITY},
        {"exponential", [](double y) { return std::exp(-y); }, 0.0, 10.0, 1.0 - std::exp(-10.0), INFINITY},
        {"cos over many periods", [](double y) { return std::cos(y); }, 0.0, 50.0, std::sin(50.0), pi},
        {"sqrt endpoint", [](double y) { return std::sqrt(y); }, 0.0, 1.0, 2.0 / 3.0, INFINITY},
        {"cos squared", [](double y) { return std::cos(5 * y) * std::cos(5 * y); }, 0.0, 2 * pi, pi, pi / 5},
        {"Runge", [](double y) { return 1.0 / (1.0 + 25.0 * y * y); }, -1.0, 1.0, 0.4 * std::atan(5.0), INFINITY},
        {"log endpoint", [](double y) { return std::log(y); }, 0.0, 1.0, -1.0, INFINITY},
        {"quintic times cosine", [](double y) { return std::pow(y, 5) * std::cos(y); }, 0.0, 10.0,
         // (5x⁴−60x²+120)cos x + x(x⁴−20x²+120)sin x − 120 at x = 10
         (5e4 - 6e3 + 120) * std::cos(10.0) + 10.0 * (1e4 - 2e3 + 120) * std::sin(10.0) - 120.0, pi},
    };
}

}  // namespace

TEST_CASE("adaptive 1D quadrature on known integrals") {
    for (const auto& k : known_integrals()) {
        CAPTURE(k.name);
        QuadratureSpec spec;
        spec.max_panel_width = k.max_width;
        const auto r = integrate_1d(k.f, k.a, k.b, spec);
        const double true_err = std::abs(r.value - k.exact);
        CHECK(true_err <= std::max(1e-10 * std::abs(k.exact), 1e-14) * 10.0);
        CHECK(r.error <= std::max(spec.rel_tol * std::abs(r.value), spec.abs_tol));
        // error estimate bounds the true error with a factor-10 margin
        CHECK(true_err <= 10.0 * r.error);
    }
}

TEST_CASE("empty interval and argument checks") {
    CHECK(integrate_1d([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
    CHECK_THROWS_AS((void)integrate_1d([](double) { return 1.0; }, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS((void)integrate_1d([](double) { return 1.0; }, 0.0, INFINITY), ArgumentError);
    QuadratureSpec bad;
    bad.order = 17;
    CHECK_THROWS_AS((void)integrate_1d([](double) { return 1.0; }, 0.0, 1.0, bad), ArgumentError);
    bad = {};
    bad.max_panels = 3;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("panel budget exhaustion carries the best estimate") {
    QuadratureSpec spec;
    spec.max_panels = 8;
    spec.rel_tol = 1e-14;
    try {
        (void)integrate_1d([](double y) { return std::pow(std::abs(y - 1.0 / 3.0), -0.9); }, 0.0, 1.0, spec);
        FAIL("expected ToleranceError");
    } catch (const ToleranceError& e) {
        CHECK(std::isfinite(e.estimate()));
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("Gauss-Legendre tables integrate polynomials exactly") {
    for (const int order : kGaussOrders) {
        CAPTURE(order);
        const auto half = gauss_legendre_half(order);
        double weights = 0.0;
        double even_moment = 0.0;
        const int degree = 2 * order - 2;
        for (const auto& n : half) {
            weights += 2.0 * n.w;
            even_moment += 2.0 * n.w * std::pow(n.x, degree);
        }
        CHECK(weights == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(even_moment == doctest::Approx(2.0 / (degree + 1)).epsilon(1e-13));
    }
    CHECK(next_gauss_order(16) == 20);
    CHECK(next_gauss_order(64) == 64);
}

TEST_CASE("semi-infinite integrals") {
    const auto e = integrate_semi_infinite([](double y) { return std::exp(-y); }, 0.0, 1.0);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));

    const auto bose = integrate_semi_infinite(
        [](double w) { return w == 0.0 ? 0.0 : std::pow(w, 5) / std::expm1(w); }, 0.0, 1.0);
    const double pi6 = std::pow(std::numbers::pi, 6);
    CHECK(bose.value == doctest::Approx(8.0 * pi6 / 63.0).epsilon(1e-11));

    CHECK_THROWS_AS((void)integrate_semi_infinite([](double) { return 1.0; }, 0.0, 1.0), DivergenceError);
    CHECK_THROWS_AS((void)integrate_semi_infinite([](double y) { return y; }, 0.0, 1.0), DivergenceError);
}

TEST_CASE("2D panel quadrature") {
    const std::vector<double> unit{0.0, 1.0};
    const auto tt = integrate_2d_panel([](double x, double y) { return x * y; }, unit, unit);
    CHECK(tt.value == doctest::Approx(0.25).epsilon(1e-14));

    const auto c = integrate_2d_panel([](double x, double y) { return std::cos(x - y); }, unit, unit);
    CHECK(c.value == doctest::Approx(2.0 * (1.0 - std::cos(1.0))).epsilon(1e-13));

    const std::vector<double> split{0.0, 0.5, 1.0};
    const auto kink = integrate_2d_panel(
        [](double x, double y) { return std::min(x, 1.0 - x) * std::min(y, 1.0 - y); }, split, split);
    CHECK(kink.value == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("separable 2D integrals equal the product of 1D integrals") {
    const auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    const auto g = [](double y) { return 1.0 / (1.0 + y * y); };
    const std::vector<double> xb{0.0, 1.5, 4.0}, yb{-1.0, 2.0};
    const auto two_d = integrate_2d_panel([&](double x, double y) { return f(x) * g(y); }, xb, yb);
    const double product = integrate_1d(f, 0.0, 4.0).value * integrate_1d(g, -1.0, 2.0).value;
    CHECK(std::abs(two_d.value - product) <= 1e-12 * std::abs(product));
}

TEST_CASE("quadrature is bit-for-bit deterministic") {
    QuadratureSpec spec;
    spec.max_panel_width = 1.0;
    const auto f = [](double y) { return std::sin(y * y) / (1.0 + y); };
    const auto a = integrate_1d(f, 0.0, 20.0, spec);
    const auto b = integrate_1d(f, 0.0, 20.0, spec);
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
    CHECK(a.panels == b.panels);
}

TEST_CASE("pairwise sum") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
