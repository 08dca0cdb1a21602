#include "gravidec/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gravidec/errors.hpp"

namespace gravidec {

namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 4> kStateNames{{
    {StateKind::vacuum, "vacuum"},
    {StateKind::thermal, "thermal"},
    {StateKind::coherent, "coherent"},
    {StateKind::squeezed, "squeezed"},
}};

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view state_name(StateKind kind) {
    for (const auto& [k, name] : kStateNames) {
        if (k == kind) return name;
    }
    throw ArgumentError("unknown state kind");
}

StateKind state_from_name(std::string_view name) {
    for (const auto& [k, n] : kStateNames) {
        if (n == name) return k;
    }
    throw ArgumentError("unknown graviton state '" + std::string(name) + "'");
}

GravitonState GravitonState::vacuum(double cutoff) { return {cutoff, cutoff, VacuumParams{}}; }

GravitonState GravitonState::thermal(double cutoff, double beta_g) {
    return {cutoff, cutoff, ThermalParams{beta_g}};
}

GravitonState GravitonState::coherent(double cutoff, double alpha, double state_cutoff) {
    return {cutoff, state_cutoff > 0.0 ? state_cutoff : cutoff, CoherentParams{alpha}};
}

GravitonState GravitonState::squeezed(double cutoff, double r, double phi, double state_cutoff) {
    return {cutoff, state_cutoff > 0.0 ? state_cutoff : cutoff, SqueezedParams{r, phi}};
}

StateKind GravitonState::kind() const { return static_cast<StateKind>(params.index()); }

void GravitonState::validate() const {
    if (!positive_finite(cutoff)) throw ArgumentError("cutoff must be positive and finite");
    if (!positive_finite(state_cutoff)) throw ArgumentError("state_cutoff must be positive and finite");
    switch (kind()) {
        case StateKind::vacuum: break;
        case StateKind::thermal:
            if (!positive_finite(thermal_params().beta_g)) throw ArgumentError("beta_g must be positive and finite");
            break;
        case StateKind::coherent:
            if (!std::isfinite(coherent_params().alpha)) throw ArgumentError("alpha must be finite");
            break;
        case StateKind::squeezed: {
            const auto& s = squeezed_params();
            if (!std::isfinite(s.r) || s.r < 0.0) throw ArgumentError("squeeze magnitude r must be finite and >= 0");
            if (!std::isfinite(s.phi)) throw ArgumentError("squeeze phase phi must be finite");
            break;
        }
    }
}

double GravitonState::max_frequency() const {
    switch (kind()) {
        case StateKind::thermal:
            // F_th(π τ/β_g) varies on the scale β_g/π
            return std::max(cutoff, std::numbers::pi / thermal_params().beta_g);
        case StateKind::coherent:
        case StateKind::squeezed: return std::max(cutoff, state_cutoff);
        case StateKind::vacuum: break;
    }
    return cutoff;
}

const ThermalParams& GravitonState::thermal_params() const {
    if (const auto* p = std::get_if<ThermalParams>(&params)) return *p;
    throw ArgumentError("state is not thermal");
}

const CoherentParams& GravitonState::coherent_params() const {
    if (const auto* p = std::get_if<CoherentParams>(&params)) return *p;
    throw ArgumentError("state is not coherent");
}

const SqueezedParams& GravitonState::squeezed_params() const {
    if (const auto* p = std::get_if<SqueezedParams>(&params)) return *p;
    throw ArgumentError("state is not squeezed");
}

void InternalBath::validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) throw ArgumentError("bath coupling lambda must be finite and >= 0");
    if (!std::isfinite(gamma) || gamma < 0.0) throw ArgumentError("Ohmic constant gamma must be finite and >= 0");
    if (!positive_finite(beta)) throw ArgumentError("bath beta must be positive and finite");
    if (const auto* full = std::get_if<FullIntegral>(&mode)) {
        if (!positive_finite(full->cutoff_int)) {
            throw ArgumentError("full-integral bath needs a positive finite cutoff_int (the integral diverges without it)");
        }
    }
}

}  // namespace gravidec
