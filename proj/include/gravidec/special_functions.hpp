#pragma once

#include <array>
#include <span>
#include <string_view>

#include "gravidec/model.hpp"
#include "gravidec/series.hpp"

namespace gravidec {

// Below switchover_x the closed forms are replaced by the Maclaurin series of the
// defining integrals. series_order counts powers kept beyond the leading one; the
// thermal profiles enforce a floor of 24 because their series converge only for
// |x| < π. At the default switchover every truncation error is below 1e-16 relative.
struct SeriesPolicy {
    double switchover_x = 0.5;
    int series_order = 12;
    double target_rel_err = 1e-12;

    // Throws ArgumentError on switchover_x <= 0, series_order outside 0..36,
    // or target_rel_err <= 0.
    void validate() const;
};

enum class Profile {
    kernel,          // F(x) = ∫₀¹ u⁵ cos(ux) du
    phased_kernel,   // F(x; φ) = ∫₀¹ u⁵ cos(ux − φ) du
    thermal_kernel,  // F_th(x) = 1/x⁶ − (2cosh⁴x + 11cosh²x + 2)/(15 sinh⁶x)
    rate,            // vacuum rate profile G
    thermal_rate,    // G_th
    coherent_rate,   // G_coh^(I)
    coherent_mixed,  // G_coh^(II)
    squeezed_rate,   // G_sq^(I)
    squeezed_mixed,  // G_sq^(II)
};

inline constexpr std::array<Profile, 9> kAllProfiles{
    Profile::kernel,         Profile::phased_kernel, Profile::thermal_kernel,
    Profile::rate,           Profile::thermal_rate,  Profile::coherent_rate,
    Profile::coherent_mixed, Profile::squeezed_rate, Profile::squeezed_mixed,
};

enum class Branch { automatic, closed_form, series };

[[nodiscard]] std::string_view profile_name(Profile p);
[[nodiscard]] bool profile_has_phase(Profile p);
// Kernel profiles are even in x; rate profiles require x >= 0.
[[nodiscard]] bool profile_is_kernel(Profile p);

// phi is ignored by profiles without a phase. Throws ArgumentError for
// non-finite x, or x < 0 for a rate profile.
[[nodiscard]] double evaluate_profile(Profile p, double x, double phi = 0.0, Branch branch = Branch::automatic,
                                      const SeriesPolicy& policy = {});

[[nodiscard]] double kernel_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double phased_kernel_profile(double x, double phi, const SeriesPolicy& policy = {});
[[nodiscard]] double thermal_kernel_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double rate_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double thermal_rate_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double coherent_rate_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double coherent_mixed_profile(double x, const SeriesPolicy& policy = {});
[[nodiscard]] double squeezed_rate_profile(double x, double phi, const SeriesPolicy& policy = {});
[[nodiscard]] double squeezed_mixed_profile(double x, double phi, const SeriesPolicy& policy = {});

// Frozen Maclaurin coefficients (x⁰..x⁴⁰) shipped with the library, checked
// against the exact oracle by the test suite.
[[nodiscard]] std::span<const double> frozen_series(SeriesId id);

// Strength of the internal-bath correction relative to the pure graviton term.
//   vacuum    γπΛ_g/(108 m0² β)
//   thermal   4γπ²/(189 m0² β β_g)
//   coherent  γπΛ̃_g/(192 m0² β)
//   squeezed  3γπΛ̄_g/(2 β m0²)
// The vacuum constant applies to every state; the others need a matching state
// (ArgumentError otherwise).
[[nodiscard]] double kappa_constant(StateKind kind, const InternalBath& bath, const GravitonState& state, double m0);

}  // namespace gravidec
