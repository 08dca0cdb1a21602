#include "gravidec/series.hpp"

#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gravidec/errors.hpp"

namespace gravidec {

namespace {

using boost::multiprecision::cpp_int;

struct NamedSeries {
    SeriesId id;
    std::string_view name;
};

constexpr std::array<NamedSeries, kAllSeries.size()> kNames{{
    {SeriesId::kernel_profile, "kernel_profile"},
    {SeriesId::kernel_profile_sine, "kernel_profile_sine"},
    {SeriesId::thermal_kernel_profile, "thermal_kernel_profile"},
    {SeriesId::rate_profile, "rate_profile"},
    {SeriesId::thermal_rate_profile, "thermal_rate_profile"},
    {SeriesId::coherent_rate_profile, "coherent_rate_profile"},
    {SeriesId::coherent_mixed_profile, "coherent_mixed_profile"},
    {SeriesId::squeezed_rate_cosine, "squeezed_rate_cosine"},
    {SeriesId::squeezed_rate_sine, "squeezed_rate_sine"},
    {SeriesId::squeezed_mixed_cosine, "squeezed_mixed_cosine"},
    {SeriesId::squeezed_mixed_sine, "squeezed_mixed_sine"},
}};

cpp_int factorial(int n) {
    cpp_int r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

cpp_int binomial(int n, int k) {
    cpp_int r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

Rational power(const Rational& base, int n) {
    Rational r = 1;
    for (int k = 0; k < n; ++k) r *= base;
    return r;
}

Rational sign(int n) { return (n % 2 == 0) ? Rational(1) : Rational(-1); }

// ∫₀¹ u⁵ cos(ux) du = Σ f_n x^{2n}
Rational cosine_moment(int n) { return sign(n) / Rational(factorial(2 * n) * (2 * n + 6)); }

// ∫₀¹ u⁵ sin(ux) du = Σ g_n x^{2n+1}
Rational sine_moment(int n) { return sign(n) / Rational(factorial(2 * n + 1) * (2 * n + 7)); }

std::vector<Rational> bernoulli_numbers(int up_to) {
    std::vector<Rational> b(static_cast<std::size_t>(up_to) + 1);
    b[0] = 1;
    for (int m = 1; m <= up_to; ++m) {
        Rational acc = 0;
        for (int k = 0; k < m; ++k) acc += Rational(binomial(m + 1, k)) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
    return b;
}

// Term-wise integration of ω⁵cos(ωτ)/(e^ω−1) gives Σ (−1)ⁿ τ^{2n} (2n+5)! ζ(2n+6)/(2n)!.
// With τ = x/π, the 60π⁶ normalization and ζ(2m) = |B_{2m}|(2π)^{2m}/(2(2m)!),
// the coefficient of x^{2n} is rational.
Rational thermal_moment(int n, const std::vector<Rational>& bernoulli) {
    Rational b = bernoulli[static_cast<std::size_t>(2 * n + 6)];
    if (b < 0) b = -b;
    return sign(n) * b * power(Rational(2), 2 * n + 5) / Rational(factorial(2 * n) * (2 * n + 6) * 60);
}

// Moments of the unit triangle w(σ) = min(σ, 1−σ) on [0, 1].
Rational triangle_moment(int k) {
    const Rational half(1, 2);
    const Rational rising = power(half, k + 2) / (k + 2);
    const Rational falling = (Rational(1) - power(half, k + 1)) / (k + 1) - (Rational(1) - power(half, k + 2)) / (k + 2);
    return rising + falling;
}

Rational triangle_square_moment(int k) {
    const Rational half(1, 2);
    const auto tail = [&](int p) { return (Rational(1) - power(half, p + 1)) / (p + 1); };
    const Rational rising = power(half, k + 3) / (k + 3);
    const Rational falling = tail(k) - 2 * tail(k + 1) + tail(k + 2);
    return rising + falling;
}

// ∫∫ w(σ)w(σ′)(σ − σ′)^k and ∫∫ w(σ)w(σ′)(σ + σ′)^k over the unit square.
Rational difference_moment(int k, const std::vector<Rational>& m) {
    Rational acc = 0;
    for (int j = 0; j <= k; ++j) {
        acc += Rational(binomial(k, j)) * sign(k - j) * m[static_cast<std::size_t>(j)] *
               m[static_cast<std::size_t>(k - j)];
    }
    return acc;
}

Rational sum_moment(int k, const std::vector<Rational>& m) {
    Rational acc = 0;
    for (int j = 0; j <= k; ++j) {
        acc += Rational(binomial(k, j)) * m[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(k - j)];
    }
    return acc;
}

void put(std::vector<Rational>& c, int power_index, const Rational& value) {
    if (power_index >= 0 && power_index < static_cast<int>(c.size())) c[static_cast<std::size_t>(power_index)] += value;
}

}  // namespace

std::string_view series_name(SeriesId id) {
    for (const auto& n : kNames) {
        if (n.id == id) return n.name;
    }
    throw ArgumentError("unknown series id");
}

SeriesId series_from_name(std::string_view name) {
    for (const auto& n : kNames) {
        if (n.name == name) return n.id;
    }
    throw ArgumentError("unknown series function '" + std::string(name) + "'");
}

std::vector<Rational> maclaurin_exact(SeriesId id, int order) {
    if (order < 0 || order > kMaxSeriesOrder) {
        throw ArgumentError("series order must lie in 0.." + std::to_string(kMaxSeriesOrder));
    }
    std::vector<Rational> c(static_cast<std::size_t>(order) + 1, Rational(0));
    const int terms = order / 2 + 1;

    std::vector<Rational> m, q;
    for (int k = 0; k <= order + 1; ++k) {
        m.push_back(triangle_moment(k));
        q.push_back(triangle_square_moment(k));
    }

    switch (id) {
        case SeriesId::kernel_profile:
            for (int n = 0; n < terms; ++n) put(c, 2 * n, cosine_moment(n));
            break;
        case SeriesId::kernel_profile_sine:
            for (int n = 0; n < terms; ++n) put(c, 2 * n + 1, sine_moment(n));
            break;
        case SeriesId::thermal_kernel_profile: {
            const auto b = bernoulli_numbers(2 * terms + 6);
            for (int n = 0; n < terms; ++n) put(c, 2 * n, thermal_moment(n, b));
            break;
        }
        case SeriesId::rate_profile:
            // (1/3) ∫∫ w w F(s − s′) over [0, x]²
            for (int n = 0; n < terms; ++n) put(c, 2 * n + 4, cosine_moment(n) * difference_moment(2 * n, m) / 3);
            break;
        case SeriesId::thermal_rate_profile: {
            const auto b = bernoulli_numbers(2 * terms + 6);
            for (int n = 0; n < terms; ++n) {
                put(c, 2 * n + 4, 60 * thermal_moment(n, b) * difference_moment(2 * n, m));
            }
            break;
        }
        case SeriesId::coherent_rate_profile:
            // (1/32) ∫∫ w w [F(s − s′) + F(s + s′)]
            for (int n = 0; n < terms; ++n) {
                put(c, 2 * n + 4, cosine_moment(n) * (difference_moment(2 * n, m) + sum_moment(2 * n, m)) / 32);
            }
            break;
        case SeriesId::coherent_mixed_profile:
            // 12 ∫ w² [F(0) + F(2s)]
            put(c, 3, 12 * q[0] / 6);
            for (int n = 0; n < terms; ++n) {
                put(c, 2 * n + 3, 12 * cosine_moment(n) * power(Rational(4), n) * q[static_cast<std::size_t>(2 * n)]);
            }
            break;
        case SeriesId::squeezed_rate_cosine:
            // 36 ∫∫ w w F(s + s′; φ), cos φ part
            for (int n = 0; n < terms; ++n) put(c, 2 * n + 4, 36 * cosine_moment(n) * sum_moment(2 * n, m));
            break;
        case SeriesId::squeezed_rate_sine:
            for (int n = 0; n < terms; ++n) put(c, 2 * n + 5, 36 * sine_moment(n) * sum_moment(2 * n + 1, m));
            break;
        case SeriesId::squeezed_mixed_cosine:
            // 48 ∫ w² F(2s; φ), cos φ part
            for (int n = 0; n < terms; ++n) {
                put(c, 2 * n + 3, 48 * cosine_moment(n) * power(Rational(2), 2 * n) * q[static_cast<std::size_t>(2 * n)]);
            }
            break;
        case SeriesId::squeezed_mixed_sine:
            for (int n = 0; n < terms; ++n) {
                put(c, 2 * n + 4,
                    48 * sine_moment(n) * power(Rational(2), 2 * n + 1) * q[static_cast<std::size_t>(2 * n + 1)]);
            }
            break;
        default:
            throw ArgumentError("unknown series id");
    }
    return c;
}

double to_double(const Rational& r) {
    using Float = boost::multiprecision::cpp_bin_float_100;
    const Float v = Float(boost::multiprecision::numerator(r)) / Float(boost::multiprecision::denominator(r));
    return v.convert_to<double>();
}

std::vector<double> maclaurin_defining_integral(SeriesId id, int order) {
    const auto exact = maclaurin_exact(id, order);
    std::vector<double> out;
    out.reserve(exact.size());
    for (const auto& r : exact) out.push_back(to_double(r));
    return out;
}

std::vector<double> maclaurin_defining_integral(std::string_view name, int order) {
    return maclaurin_defining_integral(series_from_name(name), order);
}

int leading_power(std::span<const Rational> c) {
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0) return static_cast<int>(k);
    }
    return -1;
}

double evaluate_polynomial(std::span<const double> c, int first, int last, double x) {
    if (first < 0 || last >= static_cast<int>(c.size()) || first > last) {
        throw ArgumentError("polynomial range outside coefficient table");
    }
    double acc = 0.0;
    for (int k = last; k >= first; --k) acc = acc * x + c[static_cast<std::size_t>(k)];
    return first == 0 ? acc : acc * std::pow(x, first);
}

}  // namespace gravidec
