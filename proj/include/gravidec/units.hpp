#pragma once

#include <optional>

#include "gravidec/decoherence.hpp"
#include "gravidec/model.hpp"

namespace gravidec {

// CODATA 2018 exact and recommended values, SI.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double c = 299792458.0;         // m / s
    static constexpr double G = 6.67430e-11;         // m³ / (kg s²)
    static constexpr double k_B = 1.380649e-23;      // J / K

    [[nodiscard]] static double planck_mass();         // √(ħc/G)
    [[nodiscard]] static double planck_time();         // √(ħG/c⁵)
    [[nodiscard]] static double planck_length();       // c t_P
    [[nodiscard]] static double planck_temperature();  // M_P c² / k_B
};

// One problem in SI units. Frequencies are angular, in 1/s. The bath coupling
// γ carries the units that make ϰ = k_B γ π / (ħ³ c⁴ m0²) a rate per kelvin per
// unit frequency, so that κ = ϰ Λ T / 108 is dimensionless.
struct SIProblem {
    StateKind kind = StateKind::vacuum;
    double m0 = 0.0;                     // kg
    double cutoff = 0.0;                 // Λ_g
    double state_cutoff = 0.0;           // Λ̃_g or Λ̄_g; 0 means Λ_g
    double graviton_temperature = 0.0;   // T_g, K (thermal only)
    double alpha = 0.0;
    double r = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double bath_temperature = 0.0;       // T, K
    double bath_cutoff = 0.0;            // 0 selects the white-noise bath
    Vec3 mean_position;                  // m
    Vec3 velocity;                       // m / s
    Vec3 mean_velocity;                  // m / s
    double t_f = 0.0;                    // s

    // Throws ArgumentError on missing or non-physical entries for the state kind.
    void validate() const;
};

// The same problem in Planck units (ħ = c = G = k_B = 1).
struct PlanckProblem {
    GravitonState state;
    InternalBath bath;
    SuperpositionPath path;
    double m0 = 0.0;
};

[[nodiscard]] PlanckProblem to_planck(const SIProblem& si);
[[nodiscard]] SIProblem to_si(const PlanckProblem& planck);

struct UnitSystem {
    UnitMode mode = UnitMode::planck;
    std::optional<SIProblem> si;
};

// Closed-form rates evaluated directly in SI through the restored-constant
// expressions, e.g. for the vacuum
//   (8/5π)(m0/M_pl)² Λ² (𝒦/c⁴) [G(Λt_f) + λ²κ(Λt_f)³],  κ = ϰΛT/108,
// with thermal arguments built from k_B T_g / ħ. White-noise bath only.
[[nodiscard]] DecoherenceReport gamma_closed_si(const SIProblem& si);

// Restored-constant τ_dec in seconds, e.g. (5πc⁴/8𝒦)^{1/3}(M_pl/m0)^{2/3}(1/λ²κΛ⁵)^{1/3}.
// Same domain errors as tau_dec_closed.
[[nodiscard]] double tau_dec_closed_si(const SIProblem& si);

// Planck mode is the identity. SI mode relabels the report: closed-form rates
// are re-evaluated through gamma_closed_si, quadrature rates (dimensionless)
// are kept, and tau_dec is converted to seconds. Throws ArgumentError when SI
// mode lacks its parameters.
[[nodiscard]] DecoherenceReport restore_units(const DecoherenceReport& report, const UnitSystem& units);

}  // namespace gravidec
