#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace gravidec {

// Spatial 3-vector. Holds mean positions, branch velocities and path separations.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    [[nodiscard]] bool is_finite() const;
};

[[nodiscard]] constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
[[nodiscard]] constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
[[nodiscard]] constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
[[nodiscard]] constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
[[nodiscard]] constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
[[nodiscard]] double norm(const Vec3& a);

// Direction on the unit sphere (propagation direction of a graviton mode).
class UnitVector {
public:
    // Throws ArgumentError unless |v| = 1 within 1e-12.
    explicit UnitVector(const Vec3& v);

    // theta is the polar angle from +z, phi the azimuth.
    [[nodiscard]] static UnitVector from_angles(double theta, double phi);
    [[nodiscard]] static UnitVector normalized(const Vec3& v);

    [[nodiscard]] const Vec3& vec() const noexcept { return v_; }
    [[nodiscard]] double operator[](std::size_t i) const { return v_[i]; }

private:
    Vec3 v_;
};

// Dense rank-4 tensor over three spatial indices, stored as 81 reals in
// row-major (i, j, k, l) order with 0-based indices.
using Rank4 = std::array<double, 81>;

[[nodiscard]] constexpr std::size_t rank4_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return ((i * 3 + j) * 3 + k) * 3 + l;
}

// a (δ^{ik}δ^{jl} + δ^{il}δ^{jk}) + b δ^{ij}δ^{kl}
struct IsotropicRank4 {
    double a = 3.0;
    double b = -2.0;

    // The tensor produced by the solid-angle average of the graviton polarization sum.
    [[nodiscard]] static constexpr IsotropicRank4 graviton() { return {3.0, -2.0}; }

    // Indices are 1-based (1..3). Throws ArgumentError otherwise.
    [[nodiscard]] double component(int i, int j, int k, int l) const;

    // Σ P^{ijkl} p_i q_j r_k s_l without forming the dense tensor.
    [[nodiscard]] double contract(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) const;

    [[nodiscard]] Rank4 dense() const;
};

// 𝒦 = P^{ijkl} Ξ_i v_j Ξ_k v_l.
[[nodiscard]] double contract_K(const IsotropicRank4& tensor, const Vec3& mean_position, const Vec3& velocity);

// Explicit 81-term sum. Used as the reference for the isotropic shortcut.
[[nodiscard]] double contract_dense(const Rank4& tensor, const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s);

// Orthonormal pair spanning the plane orthogonal to khat. Built by crossing
// khat with the coordinate axis of its smallest |component|.
[[nodiscard]] std::pair<Vec3, Vec3> transverse_dyad(const UnitVector& khat);

// Σ_{s=+,×} ε_s^{ij} ε_s^{kl} from the explicit polarization tensors.
[[nodiscard]] Rank4 polarization_sum(const UnitVector& khat);

// Same quantity from the transverse projector, P^{ik}P^{jl} + P^{il}P^{jk} − P^{ij}P^{kl}.
[[nodiscard]] Rank4 projector_polarization_sum(const UnitVector& khat);

// Tensor-product Gauss–Legendre in cosθ times the uniform rule in φ.
// polar_order must be one of the embedded Gauss–Legendre orders.
[[nodiscard]] Rank4 angular_integral_quadrature(int polar_order = 32, int azimuthal_points = 64);

// Quadrature at polar_order cross-checked against the next embedded order.
// Throws ToleranceError if the two differ by more than tol anywhere.
[[nodiscard]] Rank4 angular_integral_checked(int polar_order, int azimuthal_points, double tol);

struct AngularMonteCarlo {
    Rank4 mean{};
    Rank4 std_error{};
    std::size_t samples = 0;
};

// Uniform-direction Monte Carlo estimate of the same integral (scaled by 4π).
[[nodiscard]] AngularMonteCarlo angular_integral_monte_carlo(std::size_t samples, std::uint64_t seed);

[[nodiscard]] double max_abs_difference(const Rank4& a, const Rank4& b);
[[nodiscard]] Rank4 scaled(const Rank4& a, double s);

}  // namespace gravidec
