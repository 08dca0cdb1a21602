#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "gravidec/errors.hpp"
#include "gravidec/quadrature.hpp"
#include "gravidec/special_functions.hpp"

using namespace gravidec;

namespace {

constexpr double kPi = std::numbers::pi;

// (1/x⁶) ∫₀ˣ y⁵ cos(y − φ) dy
double kernel_by_quadrature(double x, double phi) {
    QuadratureSpec s;
    s.rel_tol = 5e-12;
    s.abs_tol = 1e-300;
    s.max_panel_width = kPi;
    const auto r = integrate_1d([=](double y) { return std::pow(y, 5) * std::cos(y - phi); }, 0.0, x, s);
    return r.value / std::pow(x, 6);
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> switchover_band(double center) {
    std::vector<double> xs;
    for (int k = 0; k < 20; ++k) xs.push_back(center * (0.9 + 0.2 * k / 19.0));
    return xs;
}

}  // namespace

TEST_CASE("kernel profile values") {
    CHECK(kernel_profile(0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-16));
    CHECK(relative(kernel_profile(10.0), kernel_by_quadrature(10.0, 0.0)) <= 1e-10);
    for (const double x : {0.1, 1.0, 7.0}) CHECK(kernel_profile(-x) == kernel_profile(x));
    // no overflow far out
    CHECK(std::isfinite(kernel_profile(1e200)));
}

TEST_CASE("phased kernel profile") {
    for (const double x : {0.5, 3.0, 20.0}) CHECK(phased_kernel_profile(x, 0.0) == doctest::Approx(kernel_profile(x)).epsilon(1e-14));
    CHECK(relative(phased_kernel_profile(5.0, 1.0), kernel_by_quadrature(5.0, 1.0)) <= 1e-10);
    const double near_zero = phased_kernel_profile(1e-9, kPi / 2);
    CHECK(std::isfinite(near_zero));
    // sine part starts at x/7
    CHECK(near_zero == doctest::Approx(1e-9 / 7.0).epsilon(1e-10));
}

TEST_CASE("kernel profiles match their defining integrals on a log grid") {
    for (int k = 0; k < 50; ++k) {
        const double x = 1e-3 * std::pow(1e5, k / 49.0);
        CAPTURE(x);
        CHECK(relative(kernel_profile(x), kernel_by_quadrature(x, 0.0)) <= 1e-10);
        CHECK(relative(phased_kernel_profile(x, 0.7), kernel_by_quadrature(x, 0.7)) <= 1e-10);
    }
}

TEST_CASE("thermal kernel profile") {
    CHECK(thermal_kernel_profile(0.0) == doctest::Approx(2.0 / 945.0).epsilon(1e-15));
    // Bose integral: ∫₀^∞ ω⁵ cos(ωτ)/(e^{ωβ} − 1) dω = (15π/2)(8π⁵/β⁶) F_th(πτ/β)
    const double beta = 1.0;
    const double tau = beta / kPi;
    QuadratureSpec s;
    s.rel_tol = 1e-12;
    const auto bose = integrate_semi_infinite(
        [=](double w) { return w == 0.0 ? 0.0 : std::pow(w, 5) * std::cos(w * tau) / std::expm1(w * beta); }, 0.0, 4.0,
        s);
    const double predicted = 7.5 * kPi * 8.0 * std::pow(kPi, 5) / std::pow(beta, 6) * thermal_kernel_profile(1.0);
    CHECK(relative(predicted, bose.value) <= 1e-8);

    for (const double x : {40.0, 60.0, 100.0, 700.0}) {
        CAPTURE(x);
        const double tail = thermal_kernel_profile(x);
        CHECK(std::isfinite(tail));
        CHECK(relative(tail, std::pow(x, -6)) <= 1e-12);
    }
    for (const double x : {100.0, 300.0, 700.0}) CHECK(std::abs(thermal_kernel_profile(x)) <= 1e-12);
    CHECK(thermal_kernel_profile(-2.0) == thermal_kernel_profile(2.0));
}

TEST_CASE("rate profile limits") {
    for (const double x : {1e-3, 1e-2, 5e-2}) CHECK(rate_profile(x) == doctest::Approx(std::pow(x, 4) / 288.0).epsilon(1e-3));
    CHECK(rate_profile(0.0) == 0.0);
    // oscillatory tail: |G − 1| ≤ (2/3x)·9 + (2/3 + 32/3 + 10)/x²
    for (int k = 0; k < 200; ++k) {
        const double x = 200.0 + 37.3 * k;
        CHECK(std::abs(rate_profile(x) - 1.0) <= 6.0 / x + 22.0 / (3.0 * x * x));
    }
    for (const double x : {6100.0, 1e4, 1e6}) CHECK(std::abs(rate_profile(x) - 1.0) <= 1e-3);
}

TEST_CASE("small-argument forms used for decoherence times") {
    for (const double x : {1e-4, 1e-3, 1e-2}) {
        CAPTURE(x);
        CHECK(relative(coherent_mixed_profile(x), x * x * x / 3.0) <= 0.01);
        CHECK(relative(squeezed_mixed_profile(x, 0.0), 2.0 * x * x * x / 3.0) <= 0.01);
    }
}

TEST_CASE("closed forms and series agree across the switchover") {
    const SeriesPolicy policy;
    for (const Profile p : kAllProfiles) {
        const std::vector<double> phases = profile_has_phase(p) ? std::vector<double>{0.0, 0.7, kPi / 2, 2.5}
                                                                : std::vector<double>{0.0};
        for (const double phi : phases) {
            for (const double x : switchover_band(policy.switchover_x)) {
                CAPTURE(profile_name(p));
                CAPTURE(phi);
                CAPTURE(x);
                const double series = evaluate_profile(p, x, phi, Branch::series, policy);
                const double closed = evaluate_profile(p, x, phi, Branch::closed_form, policy);
                CHECK(relative(closed, series) <= 1e-9);
            }
        }
    }
}

TEST_CASE("thermal profiles stay finite for large arguments") {
    for (const double x : {50.0, 177.0, 400.0, 700.0}) {
        CHECK(std::isfinite(thermal_rate_profile(x)));
        CHECK(std::isfinite(thermal_kernel_profile(x)));
    }
    // G_th → 1 − 15/x² as the exponentials die
    CHECK(thermal_rate_profile(700.0) == doctest::Approx(1.0 - 15.0 / (700.0 * 700.0)).epsilon(1e-15));
}

TEST_CASE("squeezed profiles are 2π periodic in the phase") {
    for (const double x : {0.2, 1.0, 7.5}) {
        for (const double phi : {0.0, 0.4, 2.0, -1.3}) {
            CHECK(std::abs(squeezed_rate_profile(x, phi) - squeezed_rate_profile(x, phi + 2 * kPi)) <=
                  1e-12 * std::max(1.0, std::abs(squeezed_rate_profile(x, phi))));
            CHECK(std::abs(squeezed_mixed_profile(x, phi) - squeezed_mixed_profile(x, phi + 2 * kPi)) <=
                  1e-12 * std::max(1.0, std::abs(squeezed_mixed_profile(x, phi))));
        }
    }
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS((void)rate_profile(-1.0), ArgumentError);
    CHECK_THROWS_AS((void)kernel_profile(NAN), ArgumentError);
    CHECK_THROWS_AS((void)evaluate_profile(Profile::rate, 0.0, 0.0, Branch::closed_form), DomainError);
    SeriesPolicy bad;
    bad.switchover_x = 0.0;
    CHECK_THROWS_AS((void)kernel_profile(1.0, bad), ArgumentError);
}

TEST_CASE("internal-bath strength constants") {
    InternalBath bath{1.0, 108.0, 1.0, WhiteNoise{}};
    CHECK(kappa_constant(StateKind::vacuum, bath, GravitonState::vacuum(1.0), 1.0) == doctest::Approx(kPi));

    bath.gamma = 1.0;
    CHECK(kappa_constant(StateKind::squeezed, bath, GravitonState::squeezed(1.0, 0.3, 0.0), 1.0) ==
          doctest::Approx(1.5 * kPi));

    bath.gamma = 189.0 / 4.0;
    CHECK(kappa_constant(StateKind::thermal, bath, GravitonState::thermal(1.0, 1.0), 1.0) ==
          doctest::Approx(kPi * kPi));

    bath.gamma = 192.0;
    CHECK(kappa_constant(StateKind::coherent, bath, GravitonState::coherent(1.0, 0.5, 2.0), 1.0) ==
          doctest::Approx(2.0 * kPi));

    // the squeezed constant is 162 times the vacuum one at equal cutoffs
    bath.gamma = 3.7;
    const auto sq = GravitonState::squeezed(2.5, 0.1, 0.0);
    CHECK(kappa_constant(StateKind::squeezed, bath, sq, 0.8) / kappa_constant(StateKind::vacuum, bath, sq, 0.8) ==
          doctest::Approx(162.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)kappa_constant(StateKind::thermal, bath, GravitonState::vacuum(1.0), 1.0), ArgumentError);
    CHECK_THROWS_AS((void)kappa_constant(StateKind::vacuum, bath, GravitonState::vacuum(1.0), 0.0), ArgumentError);
}
