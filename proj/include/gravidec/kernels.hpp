#pragma once

#include <variant>

#include "gravidec/model.hpp"
#include "gravidec/quadrature.hpp"
#include "gravidec/special_functions.hpp"
#include "gravidec/tensor_geometry.hpp"

namespace gravidec {

// Graviton noise kernel N^{ijkl}(t, t') = scalar · P^{ijkl}.
struct KernelSample {
    double scalar = 0.0;
    IsotropicRank4 tensor = IsotropicRank4::graviton();
    double t = 0.0;
    double t_prime = 0.0;

    [[nodiscard]] Rank4 full() const { return scaled(tensor.dense(), scalar); }
};

// Scalar factor of the graviton noise kernel.
//   vacuum    (m0²Λ⁶/15π) F(Λ(t − t'))
//   thermal   vacuum + (8m0²π⁵/β_g⁶) F_th(π(t − t')/β_g)
//   coherent  vacuum + (m0²α²Λ̃⁶/30π) [F(Λ̃(t − t')) + F(Λ̃(t + t'))]
//   squeezed  cosh2r · vacuum − (m0²Λ̄⁶/15π) sinh2r F(Λ̄(t + t'); φ)
// Throws ArgumentError unless m0 > 0 and the state is valid.
[[nodiscard]] double noise_scalar(const GravitonState& state, double m0, double t, double t_prime,
                                  const SeriesPolicy& policy = {});

[[nodiscard]] KernelSample noise_kernel(const GravitonState& state, double m0, double t, double t_prime,
                                        const SeriesPolicy& policy = {});

// t' → t limit of noise_scalar, taken analytically through the profile values at 0.
[[nodiscard]] double noise_equal_time(const GravitonState& state, double m0, double t,
                                      const SeriesPolicy& policy = {});

// Weight w of a white-noise kernel w·δ(t − t').
struct DeltaWeight {
    double weight = 0.0;
};

// πλ²γ/β
[[nodiscard]] double white_noise_weight(const InternalBath& bath);

// Internal-bath kernel. WhiteNoise mode returns the delta weight; FullIntegral mode
// returns (λ²γ/2)∫₀^{cutoff_int} dϖ ϖ coth(ϖβ/2) cos ϖ(t − t') by quadrature.
[[nodiscard]] std::variant<double, DeltaWeight> n_int(const InternalBath& bath, double t, double t_prime,
                                                      const QuadratureSpec& spec = {});

}  // namespace gravidec
