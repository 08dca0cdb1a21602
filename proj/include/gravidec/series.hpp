#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gravidec {

using Rational = boost::multiprecision::cpp_rational;

// Functions with a Maclaurin expansion derived from their defining integrals.
// Phase-dependent profiles are split into the parts multiplying cos φ and sin φ.
enum class SeriesId {
    kernel_profile,          // ∫₀¹ u⁵ cos(ux) du
    kernel_profile_sine,     // ∫₀¹ u⁵ sin(ux) du
    thermal_kernel_profile,  // Bose integral ∫₀^∞ ω⁵ cos(ωx/π)/(e^ω − 1) dω / 60π⁶
    rate_profile,
    thermal_rate_profile,
    coherent_rate_profile,
    coherent_mixed_profile,
    squeezed_rate_cosine,
    squeezed_rate_sine,
    squeezed_mixed_cosine,
    squeezed_mixed_sine,
};

inline constexpr std::array<SeriesId, 11> kAllSeries{
    SeriesId::kernel_profile,        SeriesId::kernel_profile_sine,   SeriesId::thermal_kernel_profile,
    SeriesId::rate_profile,          SeriesId::thermal_rate_profile,  SeriesId::coherent_rate_profile,
    SeriesId::coherent_mixed_profile, SeriesId::squeezed_rate_cosine, SeriesId::squeezed_rate_sine,
    SeriesId::squeezed_mixed_cosine, SeriesId::squeezed_mixed_sine,
};

inline constexpr int kMaxSeriesOrder = 40;

[[nodiscard]] std::string_view series_name(SeriesId id);

// Throws ArgumentError for an unknown name.
[[nodiscard]] SeriesId series_from_name(std::string_view name);

// Exact coefficients c[0..order] of x⁰..x^order. Throws ArgumentError if order
// is outside 0..kMaxSeriesOrder.
[[nodiscard]] std::vector<Rational> maclaurin_exact(SeriesId id, int order);

// Same coefficients rounded to double.
[[nodiscard]] std::vector<double> maclaurin_defining_integral(SeriesId id, int order);
[[nodiscard]] std::vector<double> maclaurin_defining_integral(std::string_view name, int order);

[[nodiscard]] double to_double(const Rational& r);

// Lowest power with a nonzero coefficient among c, or -1 if all vanish.
[[nodiscard]] int leading_power(std::span<const Rational> c);

// Σ c[k] x^k for k in [first, last] by Horner's rule.
[[nodiscard]] double evaluate_polynomial(std::span<const double> c, int first, int last, double x);

}  // namespace gravidec
