#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "gravidec/errors.hpp"
#include "gravidec/quadrature.hpp"
#include "gravidec/series.hpp"
#include "gravidec/special_functions.hpp"

using namespace gravidec;

namespace {

QuadratureSpec tight() {
    QuadratureSpec s;
    s.rel_tol = 1e-13;
    s.abs_tol = 1e-300;
    return s;
}

// ∫₀¹ u⁵ cos(uy − φ) du by quadrature.
double kernel_integral(double y, double phi) {
    return integrate_1d([=](double u) { return std::pow(u, 5) * std::cos(u * y - phi); }, 0.0, 1.0, tight()).value;
}

// Bose integral normalized so that its value at 0 is F_th(0).
double thermal_integral(double x) {
    const double tau = std::abs(x) / std::numbers::pi;
    QuadratureSpec s = tight();
    s.rel_tol = 1e-12;
    const auto r = integrate_semi_infinite(
        [=](double w) { return w == 0.0 ? 0.0 : std::pow(w, 5) * std::cos(w * tau) / std::expm1(w); }, 0.0, 4.0, s);
    return r.value / (60.0 * std::pow(std::numbers::pi, 6));
}

double triangle(double s, double x) { return s <= 0.5 * x ? s : x - s; }

double double_profile(double x, const std::function<double(double, double)>& kernel) {
    const std::vector<double> b{0.0, 0.5 * x, x};
    QuadratureSpec s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-300;
    return integrate_2d_panel([&](double a, double c) { return triangle(a, x) * triangle(c, x) * kernel(a, c); }, b, b,
                              s)
        .value;
}

double single_profile(double x, const std::function<double(double)>& kernel) {
    QuadratureSpec s = tight();
    const auto f = [&](double a) { return triangle(a, x) * triangle(a, x) * kernel(a); };
    return integrate_1d(f, 0.0, 0.5 * x, s).value + integrate_1d(f, 0.5 * x, x, s).value;
}

double series_at(SeriesId id, double x) {
    const auto c = maclaurin_defining_integral(id, kMaxSeriesOrder);
    return evaluate_polynomial(c, 0, kMaxSeriesOrder, x);
}

}  // namespace

TEST_CASE("exact low-order coefficients") {
    const auto f = maclaurin_exact(SeriesId::kernel_profile, 4);
    CHECK(f[0] == Rational(1, 6));
    CHECK(f[1] == 0);
    CHECK(f[2] == Rational(-1, 16));

    const auto g = maclaurin_exact(SeriesId::rate_profile, 8);
    CHECK(leading_power(g) == 4);
    CHECK(g[4] == Rational(1, 288));

    const auto th = maclaurin_exact(SeriesId::thermal_kernel_profile, 2);
    CHECK(th[0] == Rational(2, 945));

    const auto gth = maclaurin_exact(SeriesId::thermal_rate_profile, 6);
    CHECK(leading_power(gth) == 4);
    CHECK(gth[4] == Rational(1, 126));

    const auto coh2 = maclaurin_exact(SeriesId::coherent_mixed_profile, 5);
    CHECK(leading_power(coh2) == 3);
    CHECK(coh2[3] == Rational(1, 3));

    const auto sq2 = maclaurin_exact(SeriesId::squeezed_mixed_cosine, 5);
    CHECK(leading_power(sq2) == 3);
    CHECK(sq2[3] == Rational(2, 3));

    const auto coh1 = maclaurin_exact(SeriesId::coherent_rate_profile, 6);
    CHECK(leading_power(coh1) == 4);
    CHECK(coh1[4] == Rational(1, 1536));
}

TEST_CASE("kernel series has definite parity") {
    const auto even = maclaurin_exact(SeriesId::kernel_profile, kMaxSeriesOrder);
    const auto odd = maclaurin_exact(SeriesId::kernel_profile_sine, kMaxSeriesOrder);
    for (std::size_t k = 1; k < even.size(); k += 2) CHECK(even[k] == 0);
    for (std::size_t k = 0; k < odd.size(); k += 2) CHECK(odd[k] == 0);
}

TEST_CASE("series reproduce the defining integrals") {
    const double x = 0.4;
    const double phi = 0.9;
    CHECK(series_at(SeriesId::kernel_profile, x) == doctest::Approx(kernel_integral(x, 0.0)).epsilon(1e-13));
    CHECK(series_at(SeriesId::kernel_profile_sine, x) ==
          doctest::Approx(kernel_integral(x, 0.5 * std::numbers::pi)).epsilon(1e-13));
    CHECK(series_at(SeriesId::thermal_kernel_profile, 1.3) == doctest::Approx(thermal_integral(1.3)).epsilon(1e-11));

    const auto F = [](double y) { return kernel_integral(y, 0.0); };
    CHECK(series_at(SeriesId::rate_profile, x) ==
          doctest::Approx(double_profile(x, [&](double a, double c) { return F(a - c); }) / 3.0).epsilon(1e-9));
    CHECK(series_at(SeriesId::thermal_rate_profile, x) ==
          doctest::Approx(60.0 * double_profile(x, [](double a, double c) { return thermal_integral(a - c); }))
              .epsilon(1e-9));
    CHECK(series_at(SeriesId::coherent_rate_profile, x) ==
          doctest::Approx(double_profile(x, [&](double a, double c) { return F(a - c) + F(a + c); }) / 32.0)
              .epsilon(1e-9));
    CHECK(series_at(SeriesId::coherent_mixed_profile, x) ==
          doctest::Approx(12.0 * single_profile(x, [&](double a) { return 1.0 / 6.0 + F(2.0 * a); })).epsilon(1e-12));

    const double squeezed_rate =
        std::cos(phi) * series_at(SeriesId::squeezed_rate_cosine, x) + std::sin(phi) * series_at(SeriesId::squeezed_rate_sine, x);
    CHECK(squeezed_rate ==
          doctest::Approx(36.0 * double_profile(x, [&](double a, double c) { return kernel_integral(a + c, phi); }))
              .epsilon(1e-9));
    const double squeezed_mixed = std::cos(phi) * series_at(SeriesId::squeezed_mixed_cosine, x) +
                                  std::sin(phi) * series_at(SeriesId::squeezed_mixed_sine, x);
    CHECK(squeezed_mixed ==
          doctest::Approx(48.0 * single_profile(x, [&](double a) { return kernel_integral(2.0 * a, phi); }))
              .epsilon(1e-12));
}

TEST_CASE("frozen tables equal the oracle bit for bit") {
    for (const SeriesId id : kAllSeries) {
        CAPTURE(series_name(id));
        const auto oracle = maclaurin_defining_integral(id, kMaxSeriesOrder);
        const auto frozen = frozen_series(id);
        REQUIRE(frozen.size() == oracle.size());
        for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(frozen[k] == oracle[k]);
    }
}

TEST_CASE("series lookup and argument errors") {
    CHECK(series_from_name("rate_profile") == SeriesId::rate_profile);
    CHECK_THROWS_AS((void)maclaurin_defining_integral("no_such_function", 4), ArgumentError);
    CHECK_THROWS_AS((void)maclaurin_exact(SeriesId::kernel_profile, 41), ArgumentError);
    CHECK_THROWS_AS((void)maclaurin_exact(SeriesId::kernel_profile, -1), ArgumentError);
    const std::vector<double> c{1.0, 2.0, 3.0};
    CHECK(evaluate_polynomial(c, 0, 2, 2.0) == 17.0);
    CHECK(evaluate_polynomial(c, 1, 2, 2.0) == 16.0);
    CHECK_THROWS_AS((void)evaluate_polynomial(c, 0, 3, 1.0), ArgumentError);
}
