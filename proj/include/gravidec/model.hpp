#pragma once

#include <string_view>
#include <variant>

namespace gravidec {

enum class StateKind { vacuum, thermal, coherent, squeezed };

[[nodiscard]] std::string_view state_name(StateKind kind);
// Throws ArgumentError for an unknown name.
[[nodiscard]] StateKind state_from_name(std::string_view name);

struct VacuumParams {};

struct ThermalParams {
    double beta_g = 0.0;  // inverse graviton temperature
};

struct CoherentParams {
    double alpha = 0.0;  // real displacement
};

struct SqueezedParams {
    double r = 0.0;
    double phi = 0.0;
};

// Initial state of the graviton field. Every state carries the vacuum part with
// cutoff Λ_g; coherent and squeezed states add a term with their own cutoff
// (state_cutoff), which defaults to Λ_g.
struct GravitonState {
    double cutoff = 0.0;
    double state_cutoff = 0.0;
    std::variant<VacuumParams, ThermalParams, CoherentParams, SqueezedParams> params;

    [[nodiscard]] static GravitonState vacuum(double cutoff);
    [[nodiscard]] static GravitonState thermal(double cutoff, double beta_g);
    [[nodiscard]] static GravitonState coherent(double cutoff, double alpha, double state_cutoff = 0.0);
    [[nodiscard]] static GravitonState squeezed(double cutoff, double r, double phi, double state_cutoff = 0.0);

    [[nodiscard]] StateKind kind() const;

    // Throws ArgumentError on non-positive or non-finite cutoffs, beta_g <= 0, r < 0.
    void validate() const;

    // Largest angular frequency present in the kernel; sets quadrature panel widths.
    [[nodiscard]] double max_frequency() const;

    [[nodiscard]] const ThermalParams& thermal_params() const;
    [[nodiscard]] const CoherentParams& coherent_params() const;
    [[nodiscard]] const SqueezedParams& squeezed_params() const;
};

// High-temperature limit: N_int(t, t') = (πλ²γ/β) δ(t − t').
struct WhiteNoise {};

// Full Ohmic kernel (λ²γ/2)∫₀^{cutoff_int} dϖ ϖ coth(ϖβ/2) cos ϖ(t − t').
struct FullIntegral {
    double cutoff_int = 0.0;
};

struct InternalBath {
    double lambda = 0.0;
    double gamma = 0.0;
    double beta = 1.0;
    std::variant<WhiteNoise, FullIntegral> mode;

    [[nodiscard]] bool white_noise() const { return std::holds_alternative<WhiteNoise>(mode); }

    // Throws ArgumentError on lambda < 0, gamma < 0, beta <= 0, or a FullIntegral
    // mode without a positive finite cutoff.
    void validate() const;
};

}  // namespace gravidec
