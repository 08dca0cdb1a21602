#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gravidec/model.hpp"
#include "gravidec/quadrature.hpp"
#include "gravidec/special_functions.hpp"
#include "gravidec/tensor_geometry.hpp"

namespace gravidec {

// Two branches leave a common point, separate at constant relative velocity 2v
// for t_f/2 and recombine over the second half. Mean position and mean velocity
// are time independent.
struct SuperpositionPath {
    Vec3 velocity;       // v, half the relative branch velocity
    Vec3 mean_position;  // Ξ
    Vec3 mean_velocity;  // V
    double t_f = 0.0;

    // Triangle profile w(t): t on [0, t_f/2], t_f − t after. Δξ(t) = 2 v w(t).
    [[nodiscard]] double profile(double t) const;
    [[nodiscard]] Vec3 separation(double t) const;
    // dΔξ/dt: +2v before t_f/2, −2v after (the kink itself takes +2v).
    [[nodiscard]] Vec3 velocity_difference(double t) const;
    // 𝒦 = P^{ijkl} Ξ_i v_j Ξ_k v_l with the graviton P.
    [[nodiscard]] double K() const;

    [[nodiscard]] SuperpositionPath with_duration(double t) const;

    // Throws ArgumentError unless t_f is positive and every component is finite.
    void validate() const;
};

enum class Method { closed_form, quadrature };

[[nodiscard]] std::string_view method_name(Method m);

enum class UnitMode { planck, si };

struct DecoherenceReport {
    double gamma_velocity = 0.0;
    double gamma_grav = 0.0;
    double gamma_mixed = 0.0;
    double gamma_total = 0.0;
    Method method = Method::closed_form;
    UnitMode units = UnitMode::planck;
    std::optional<double> tau_dec;

    // Error estimates; zero for closed forms and analytic terms.
    double error_velocity = 0.0;
    double error_grav = 0.0;
    double error_mixed = 0.0;

    double K = 0.0;
    std::vector<std::string> warnings;
};

// Closed forms for a white-noise bath. With x = Λt_f,
//   vacuum    (8m0²/5π) Λ² 𝒦 [G(x) + λ²κ x³]
//   thermal   vacuum + (16m0²π/15β_g²) 𝒦 [G_th(y) + λ²κ_th y³],          y = πt_f/β_g
//   coherent  vacuum + (128m0²α²Λ̃²/15π) 𝒦 [G_coh_I(z) + λ²κ_coh G_coh_II(z)], z = Λ̃t_f
//   squeezed  cosh2r · vacuum − (2m0²Λ̄²/135π) 𝒦 sinh2r [G_sq_I(z; φ) + λ²κ_sq G_sq_II(z; φ)]
// G terms go to gamma_grav, κ terms to gamma_mixed. gamma_velocity is the
// analytic white-noise value 4λ²γπ (V·v)² t_f / β and enters gamma_total.
// Throws UnsupportedModeError for a FullIntegral bath.
[[nodiscard]] DecoherenceReport gamma_closed(const GravitonState& state, const InternalBath& bath,
                                             const SuperpositionPath& path, double m0,
                                             const SeriesPolicy& policy = {});

// Direct integration of the decoherence functional along the path:
//   velocity  ∫∫ (V·Δv(t)) N_int(t, t') (V·Δv(t'))
//   grav      2∫∫ Ξ_iΔξ_j(t) N^{ijkl}(t, t') Ξ_kΔξ_l(t')
//   mixed     (4/m0²)∫∫ N_int(t, t') Ξ_iΔξ_j(t) N^{ijkl}(t, t') Ξ_kΔξ_l(t')
// White noise collapses the velocity and mixed terms to single integrals. The
// square [0, t_f]² is split at the kink t_f/2 and panels are capped at half
// the shortest kernel period. Throws ToleranceError on non-convergence.
[[nodiscard]] DecoherenceReport gamma_quadrature(const GravitonState& state, const InternalBath& bath,
                                                 const SuperpositionPath& path, double m0,
                                                 const QuadratureSpec& quad = {});

// τ_dec from the small-x (cubic) limit of the closed forms, Planck units:
//   vacuum    τ³ = 5π / (8𝒦 m0² λ² κΛ⁵)
//   thermal   τ³ = 15π / (8𝒦 m0² λ² (3κΛ⁵ + 2π⁵κ_th T_g⁵))
//   coherent  τ³ = 45π / (8𝒦 m0² λ² (9κΛ⁵ + 16α²κ_coh Λ̃⁵))
//   squeezed  τ³ = 405π / (4𝒦 m0² λ² (162κΛ⁵ cosh2r − κ_sq Λ̄⁵ sinh2r))
// The squeezed form takes the φ = 0 small-x coefficient of G_sq_II.
// Throws DomainError when 𝒦 ≤ 0, λ = 0 or the bracket is non-positive.
[[nodiscard]] double tau_dec_closed(const GravitonState& state, const InternalBath& bath, double m0, double K);

// Solves gamma_grav + gamma_mixed = 1 on the closed forms, rescaling the path
// to t_f = t at every trial. The velocity term is excluded, as in tau_dec_closed.
// Throws BracketError when no sign change is found and ToleranceError when
// the converged bracket leaves |Γ − 1| > tol.
[[nodiscard]] double tau_dec_root(const GravitonState& state, const InternalBath& bath,
                                  const SuperpositionPath& path_template, double m0, double tol = 1e-10);

}  // namespace gravidec
