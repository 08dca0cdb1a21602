#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gravidec/decoherence.hpp"
#include "gravidec/model.hpp"

namespace gravidec {

// Uniform grid t_a = a·t_f/(n − 1), a = 0..n−1.
struct TimeGrid {
    double t_f = 0.0;
    int n = 0;

    [[nodiscard]] double step() const { return t_f / (n - 1); }
    [[nodiscard]] double at(int a) const { return a * step(); }
    // Trapezoid weights.
    [[nodiscard]] double weight(int a) const { return (a == 0 || a == n - 1) ? 0.5 * step() : step(); }
};

struct MCConfig {
    int n_steps = 64;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 0;
    // Eigenvalues above −psd_jitter·λ_max are clamped to zero; lower ones are an error.
    double psd_jitter = 1e-10;
    unsigned threads = 0;  // 0 → hardware concurrency

    // Throws ArgumentError unless n_steps ≥ 8, n_samples ≥ 100 and jitter ≥ 0.
    void validate() const;
};

// Orthonormal basis of symmetric 3×3 tensors under the Frobenius product:
// e11, e22, e33, then (e_ij + e_ji)/√2 for (12), (13), (23). Row-major 3×3.
[[nodiscard]] const std::array<std::array<double, 9>, 6>& symmetric_basis();

// P^{ijkl} as a map on symmetric tensors in symmetric_basis coordinates.
[[nodiscard]] Eigen::Matrix<double, 6, 6> tensor_block(const IsotropicRank4& tensor);

// Covariance of the six basis coordinates of 𝒩_ij on the grid:
// Cov(n_p(t_a), n_q(t_b)) = time(a, b) · tensor(p, q).
struct NoiseCovariance {
    TimeGrid grid;
    Eigen::MatrixXd time;
    Eigen::Matrix<double, 6, 6> tensor;

    // Index of (time a, component p) in dense(): 6a + p.
    [[nodiscard]] Eigen::MatrixXd dense() const;
};

[[nodiscard]] NoiseCovariance build_covariance(const GravitonState& state, double m0, const TimeGrid& grid);

struct NoiseField {
    TimeGrid grid;
    std::size_t n_samples = 0;
    // values[(sample·n + a)·6 + p]
    std::vector<double> values;
    // Eigenvalues of the time covariance that were clamped to zero.
    std::size_t clamped_modes = 0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;

    [[nodiscard]] double component(std::size_t sample, int a, int p) const {
        return values[(sample * static_cast<std::size_t>(grid.n) + static_cast<std::size_t>(a)) * 6 +
                      static_cast<std::size_t>(p)];
    }
    // 𝒩_ij(t_a) of one sample, row-major.
    [[nodiscard]] std::array<double, 9> tensor(std::size_t sample, int a) const;
};

// Zero-mean Gaussian draws by spectral factorization of both covariance
// factors. Sample k uses its own generator seeded from (seed, k), so the
// ensemble is identical for every thread count. Throws PsdError when an
// eigenvalue falls below −psd_jitter·λ_max.
[[nodiscard]] NoiseField sample_field(const NoiseCovariance& cov, const MCConfig& config);

// c_{a,p} = w_a (E_p : A(t_a)), A = ΞΔξᵀ + ΔξΞᵀ, so that Φ = Σ c_{a,p} n_p(t_a).
[[nodiscard]] std::vector<double> phase_weights(const TimeGrid& grid, const SuperpositionPath& path);

// ½ Var Φ for the discretized problem, computed exactly from the covariance.
// Equals the Monte Carlo target and tends to gamma_grav as the grid refines.
[[nodiscard]] double discrete_gamma(const NoiseCovariance& cov, const SuperpositionPath& path);

struct GammaEstimate {
    double gamma = 0.0;      // −log ⟨cos Φ⟩
    double std_error = 0.0;  // jackknife
    double mean_cos = 0.0;
    double mean_sin = 0.0;
    double sin_std_error = 0.0;
    double phase_variance = 0.0;  // empirical Var Φ
    std::size_t n_samples = 0;
};

// Throws ArgumentError if the path duration differs from the grid, and
// SaturationError if ⟨cos Φ⟩ ≤ 0.
[[nodiscard]] GammaEstimate estimate_gamma(const NoiseField& field, const SuperpositionPath& path);

}  // namespace gravidec
