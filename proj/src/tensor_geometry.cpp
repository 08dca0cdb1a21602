#include "gravidec/tensor_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gravidec/errors.hpp"
#include "gravidec/quadrature.hpp"

namespace gravidec {

namespace {

constexpr double kUnitTolerance = 1e-12;

double delta(std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }

void check_index(int i) {
    if (i < 1 || i > 3) {
        throw ArgumentError("tensor index " + std::to_string(i) + " outside 1..3");
    }
}

std::array<double, 9> outer_sym(const Vec3& a, const Vec3& b, double sign) {
    std::array<double, 9> e{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            e[i * 3 + j] = a[i] * b[j] + sign * b[i] * a[j];
        }
    }
    return e;
}

}  // namespace

bool Vec3::is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

UnitVector::UnitVector(const Vec3& v) : v_(v) {
    if (!v.is_finite() || std::abs(norm(v) - 1.0) > kUnitTolerance) {
        throw ArgumentError("direction is not a unit vector");
    }
}

UnitVector UnitVector::from_angles(double theta, double phi) {
    const double s = std::sin(theta);
    return normalized({s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
}

UnitVector UnitVector::normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ArgumentError("cannot normalize a zero or non-finite vector");
    }
    return UnitVector((1.0 / n) * v);
}

double IsotropicRank4::component(int i, int j, int k, int l) const {
    check_index(i);
    check_index(j);
    check_index(k);
    check_index(l);
    const auto d = [](int p, int q) { return p == q ? 1.0 : 0.0; };
    return a * (d(i, k) * d(j, l) + d(i, l) * d(j, k)) + b * d(i, j) * d(k, l);
}

double IsotropicRank4::contract(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) const {
    return a * (dot(p, r) * dot(q, s) + dot(p, s) * dot(q, r)) + b * dot(p, q) * dot(r, s);
}

Rank4 IsotropicRank4::dense() const {
    Rank4 out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    out[rank4_index(i, j, k, l)] =
                        a * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)) + b * delta(i, j) * delta(k, l);
    return out;
}

double contract_K(const IsotropicRank4& tensor, const Vec3& mean_position, const Vec3& velocity) {
    return tensor.contract(mean_position, velocity, mean_position, velocity);
}

double contract_dense(const Rank4& tensor, const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    sum += tensor[rank4_index(i, j, k, l)] * p[i] * q[j] * r[k] * s[l];
    return sum;
}

std::pair<Vec3, Vec3> transverse_dyad(const UnitVector& khat) {
    const Vec3& k = khat.vec();
    const std::array<double, 3> mag{std::abs(k.x), std::abs(k.y), std::abs(k.z)};
    const auto smallest = static_cast<std::size_t>(std::min_element(mag.begin(), mag.end()) - mag.begin());
    const Vec3 axis{smallest == 0 ? 1.0 : 0.0, smallest == 1 ? 1.0 : 0.0, smallest == 2 ? 1.0 : 0.0};
    const Vec3 e1 = UnitVector::normalized(cross(k, axis)).vec();
    const Vec3 e2 = cross(k, e1);
    return {e1, e2};
}

Rank4 polarization_sum(const UnitVector& khat) {
    const auto [e1, e2] = transverse_dyad(khat);
    // ε+ = e1e1 − e2e2, ε× = e1e2 + e2e1
    std::array<double, 9> plus{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) plus[i * 3 + j] = e1[i] * e1[j] - e2[i] * e2[j];
    const auto times = outer_sym(e1, e2, 1.0);

    Rank4 out{};
    for (std::size_t ij = 0; ij < 9; ++ij)
        for (std::size_t kl = 0; kl < 9; ++kl) out[ij * 9 + kl] = plus[ij] * plus[kl] + times[ij] * times[kl];
    return out;
}

Rank4 projector_polarization_sum(const UnitVector& khat) {
    std::array<double, 9> proj{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) proj[i * 3 + j] = delta(i, j) - khat[i] * khat[j];
    const auto P = [&](std::size_t i, std::size_t j) { return proj[i * 3 + j]; };

    Rank4 out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    out[rank4_index(i, j, k, l)] = P(i, k) * P(j, l) + P(i, l) * P(j, k) - P(i, j) * P(k, l);
    return out;
}

Rank4 angular_integral_quadrature(int polar_order, int azimuthal_points) {
    if (azimuthal_points < 1) {
        throw ArgumentError("azimuthal point count must be positive");
    }
    const auto half = gauss_legendre_half(polar_order);
    const double dphi = 2.0 * std::numbers::pi / azimuthal_points;

    Rank4 acc{};
    for (const auto& node : half) {
        for (const double mu : {-node.x, node.x}) {
            const double sin_theta = std::sqrt((1.0 - mu) * (1.0 + mu));
            for (int m = 0; m < azimuthal_points; ++m) {
                const double phi = dphi * m;
                const UnitVector khat =
                    UnitVector::normalized({sin_theta * std::cos(phi), sin_theta * std::sin(phi), mu});
                const Rank4 sample = polarization_sum(khat);
                for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += node.w * dphi * sample[c];
            }
        }
    }
    return acc;
}

Rank4 angular_integral_checked(int polar_order, int azimuthal_points, double tol) {
    const Rank4 coarse = angular_integral_quadrature(polar_order, azimuthal_points);
    const Rank4 fine = angular_integral_quadrature(next_gauss_order(polar_order), 2 * azimuthal_points);
    const double residual = max_abs_difference(coarse, fine);
    if (residual > tol) {
        throw ToleranceError("sphere quadrature not converged at polar order " + std::to_string(polar_order),
                             coarse[0], residual);
    }
    return coarse;
}

AngularMonteCarlo angular_integral_monte_carlo(std::size_t samples, std::uint64_t seed) {
    if (samples < 2) {
        throw ArgumentError("Monte Carlo needs at least two samples");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mu_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);

    Rank4 sum{};
    Rank4 sum_sq{};
    for (std::size_t n = 0; n < samples; ++n) {
        const double mu = mu_dist(rng);
        const double phi = phi_dist(rng);
        const double s = std::sqrt((1.0 - mu) * (1.0 + mu));
        const Rank4 f = polarization_sum(UnitVector::normalized({s * std::cos(phi), s * std::sin(phi), mu}));
        for (std::size_t c = 0; c < f.size(); ++c) {
            sum[c] += f[c];
            sum_sq[c] += f[c] * f[c];
        }
    }

    constexpr double area = 4.0 * std::numbers::pi;
    const auto count = static_cast<double>(samples);
    AngularMonteCarlo out;
    out.samples = samples;
    for (std::size_t c = 0; c < sum.size(); ++c) {
        const double mean = sum[c] / count;
        const double var = std::max(0.0, sum_sq[c] / count - mean * mean) * count / (count - 1.0);
        out.mean[c] = area * mean;
        out.std_error[c] = area * std::sqrt(var / count);
    }
    return out;
}

double max_abs_difference(const Rank4& a, const Rank4& b) {
    double worst = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) worst = std::max(worst, std::abs(a[c] - b[c]));
    return worst;
}

Rank4 scaled(const Rank4& a, double s) {
    Rank4 out{};
    std::transform(a.begin(), a.end(), out.begin(), [s](double v) { return s * v; });
    return out;
}

}  // namespace gravidec
