#include "gravidec/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gravidec/errors.hpp"
#include "gravidec/special_functions.hpp"

namespace gravidec {

namespace {

constexpr double kPi = std::numbers::pi;
using C = PhysicalConstants;

void require(bool ok, const char* what) {
    if (!ok) throw ArgumentError(std::string("SI problem: ") + what);
}

double effective_state_cutoff(const SIProblem& si) { return si.state_cutoff > 0.0 ? si.state_cutoff : si.cutoff; }

// ϰ = k_B γ π / (ħ³ c⁴ m0²)
double varkappa(const SIProblem& si) {
    return C::k_B * si.gamma * kPi / (std::pow(C::hbar, 3) * std::pow(C::c, 4) * si.m0 * si.m0);
}

double graviton_frequency(const SIProblem& si) { return C::k_B * si.graviton_temperature / C::hbar; }

}  // namespace

double PhysicalConstants::planck_mass() { return std::sqrt(hbar * c / G); }
double PhysicalConstants::planck_time() { return std::sqrt(hbar * G / std::pow(c, 5)); }
double PhysicalConstants::planck_length() { return c * planck_time(); }
double PhysicalConstants::planck_temperature() { return planck_mass() * c * c / k_B; }

void SIProblem::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    const auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
    require(positive(m0), "m0 must be positive");
    require(positive(cutoff), "cutoff must be positive");
    require(non_negative(state_cutoff), "state_cutoff must be non-negative");
    require(non_negative(lambda) && non_negative(gamma), "lambda and gamma must be non-negative");
    require(positive(bath_temperature), "bath_temperature must be positive");
    require(non_negative(bath_cutoff), "bath_cutoff must be non-negative");
    require(positive(t_f), "t_f must be positive");
    require(mean_position.is_finite() && velocity.is_finite() && mean_velocity.is_finite(), "path vectors must be finite");
    require(std::isfinite(alpha) && std::isfinite(phi), "alpha and phi must be finite");
    if (kind == StateKind::thermal) require(positive(graviton_temperature), "thermal state needs graviton_temperature");
    if (kind == StateKind::squeezed) require(non_negative(r), "squeeze parameter r must be non-negative");
}

PlanckProblem to_planck(const SIProblem& si) {
    si.validate();
    const double mp = C::planck_mass();
    const double tp = C::planck_time();
    const double lp = C::planck_length();
    const double temp_p = C::planck_temperature();

    PlanckProblem p;
    const double cutoff = si.cutoff * tp;
    const double state_cutoff = effective_state_cutoff(si) * tp;
    switch (si.kind) {
        case StateKind::vacuum: p.state = GravitonState::vacuum(cutoff); break;
        case StateKind::thermal: p.state = GravitonState::thermal(cutoff, temp_p / si.graviton_temperature); break;
        case StateKind::coherent: p.state = GravitonState::coherent(cutoff, si.alpha, state_cutoff); break;
        case StateKind::squeezed: p.state = GravitonState::squeezed(cutoff, si.r, si.phi, state_cutoff); break;
    }
    p.bath.lambda = si.lambda;
    p.bath.gamma = si.gamma / (std::pow(C::hbar, 3) * C::c * C::c * tp * mp);
    p.bath.beta = temp_p / si.bath_temperature;
    if (si.bath_cutoff > 0.0) {
        p.bath.mode = FullIntegral{si.bath_cutoff * tp};
    } else {
        p.bath.mode = WhiteNoise{};
    }
    p.path.mean_position = (1.0 / lp) * si.mean_position;
    p.path.velocity = (1.0 / C::c) * si.velocity;
    p.path.mean_velocity = (1.0 / C::c) * si.mean_velocity;
    p.path.t_f = si.t_f / tp;
    p.m0 = si.m0 / mp;
    return p;
}

SIProblem to_si(const PlanckProblem& p) {
    p.state.validate();
    p.bath.validate();
    p.path.validate();
    const double mp = C::planck_mass();
    const double tp = C::planck_time();
    const double lp = C::planck_length();
    const double temp_p = C::planck_temperature();

    SIProblem si;
    si.kind = p.state.kind();
    si.m0 = p.m0 * mp;
    si.cutoff = p.state.cutoff / tp;
    si.state_cutoff = p.state.state_cutoff / tp;
    switch (si.kind) {
        case StateKind::vacuum: break;
        case StateKind::thermal: si.graviton_temperature = temp_p / p.state.thermal_params().beta_g; break;
        case StateKind::coherent: si.alpha = p.state.coherent_params().alpha; break;
        case StateKind::squeezed:
            si.r = p.state.squeezed_params().r;
            si.phi = p.state.squeezed_params().phi;
            break;
    }
    si.lambda = p.bath.lambda;
    si.gamma = p.bath.gamma * std::pow(C::hbar, 3) * C::c * C::c * tp * mp;
    si.bath_temperature = temp_p / p.bath.beta;
    si.bath_cutoff = p.bath.white_noise() ? 0.0 : std::get<FullIntegral>(p.bath.mode).cutoff_int / tp;
    si.mean_position = lp * p.path.mean_position;
    si.velocity = C::c * p.path.velocity;
    si.mean_velocity = C::c * p.path.mean_velocity;
    si.t_f = p.path.t_f * tp;
    return si;
}

DecoherenceReport gamma_closed_si(const SIProblem& si) {
    si.validate();
    if (si.bath_cutoff > 0.0) {
        throw UnsupportedModeError("restored closed forms assume a white-noise bath");
    }
    const double mass_ratio2 = std::pow(si.m0 / C::planck_mass(), 2);
    const double K = contract_K(IsotropicRank4::graviton(), si.mean_position, si.velocity);
    const double K_c4 = K / std::pow(C::c, 4);
    const double vk = varkappa(si);
    const double temp = si.bath_temperature;
    const double lam2 = si.lambda * si.lambda;
    const double cutoff = si.cutoff;
    const double sc = effective_state_cutoff(si);

    const double x = cutoff * si.t_f;
    const double vac_pref = 8.0 / (5.0 * kPi) * mass_ratio2 * cutoff * cutoff * K_c4;
    const double kappa = vk * cutoff * temp / 108.0;
    double grav = vac_pref * rate_profile(x);
    double mixed = vac_pref * lam2 * kappa * x * x * x;

    switch (si.kind) {
        case StateKind::vacuum: break;
        case StateKind::thermal: {
            const double omega_g = graviton_frequency(si);
            const double y = kPi * omega_g * si.t_f;
            const double pref = 16.0 * kPi / 15.0 * mass_ratio2 * omega_g * omega_g * K_c4;
            const double kappa_th = 4.0 * kPi / 189.0 * vk * omega_g * temp;
            grav += pref * thermal_rate_profile(y);
            mixed += pref * lam2 * kappa_th * y * y * y;
            break;
        }
        case StateKind::coherent: {
            const double z = sc * si.t_f;
            const double pref = 128.0 / (15.0 * kPi) * mass_ratio2 * si.alpha * si.alpha * sc * sc * K_c4;
            const double kappa_coh = vk * sc * temp / 192.0;
            grav += pref * coherent_rate_profile(z);
            mixed += pref * lam2 * kappa_coh * coherent_mixed_profile(z);
            break;
        }
        case StateKind::squeezed: {
            const double z = sc * si.t_f;
            const double pref = 2.0 / (135.0 * kPi) * mass_ratio2 * sc * sc * K_c4 * std::sinh(2.0 * si.r);
            const double kappa_sq = 1.5 * vk * sc * temp;
            const double ch = std::cosh(2.0 * si.r);
            grav = ch * grav - pref * squeezed_rate_profile(z, si.phi);
            mixed = ch * mixed - pref * lam2 * kappa_sq * squeezed_mixed_profile(z, si.phi);
            break;
        }
    }

    DecoherenceReport r;
    r.method = Method::closed_form;
    r.units = UnitMode::si;
    r.K = K;
    if (!(K > 0.0)) r.warnings.emplace_back("K <= 0: the graviton and mixed terms vanish or change sign for this geometry");
    const double vv = dot(si.mean_velocity, si.velocity);
    // (λ²γπ/β)·4(V·v)²t_f with every constant restored
    r.gamma_velocity = 4.0 * lam2 * vk * si.m0 * si.m0 * temp * vv * vv * si.t_f / (C::hbar * C::hbar);
    r.gamma_grav = grav;
    r.gamma_mixed = mixed;
    r.gamma_total = r.gamma_velocity + r.gamma_grav + r.gamma_mixed;
    return r;
}

double tau_dec_closed_si(const SIProblem& si) {
    si.validate();
    const char* no_root = "no finite tau_dec in small-x approximation";
    const double K = contract_K(IsotropicRank4::graviton(), si.mean_position, si.velocity);
    if (!(K > 0.0) || !(si.lambda > 0.0)) throw DomainError(no_root);

    const double mass_ratio2 = std::pow(si.m0 / C::planck_mass(), 2);
    const double vk = varkappa(si);
    const double temp = si.bath_temperature;
    const double cutoff5 = std::pow(si.cutoff, 5);
    const double sc = effective_state_cutoff(si);
    const double kappa = vk * si.cutoff * temp / 108.0;

    double numerator = 0.0;
    double bracket = 0.0;
    switch (si.kind) {
        case StateKind::vacuum:
            numerator = 5.0 * kPi / 8.0;
            bracket = kappa * cutoff5;
            break;
        case StateKind::thermal: {
            const double omega_g = graviton_frequency(si);
            const double kappa_th = 4.0 * kPi / 189.0 * vk * omega_g * temp;
            numerator = 15.0 * kPi / 8.0;
            bracket = 3.0 * kappa * cutoff5 + 2.0 * std::pow(kPi, 5) * kappa_th * std::pow(omega_g, 5);
            break;
        }
        case StateKind::coherent:
            numerator = 45.0 * kPi / 8.0;
            bracket = 9.0 * kappa * cutoff5 + 16.0 * si.alpha * si.alpha * (vk * sc * temp / 192.0) * std::pow(sc, 5);
            break;
        case StateKind::squeezed:
            numerator = 405.0 * kPi / 4.0;
            bracket = 162.0 * kappa * cutoff5 * std::cosh(2.0 * si.r) -
                      1.5 * vk * sc * temp * std::pow(sc, 5) * std::sinh(2.0 * si.r);
            break;
    }
    if (!(bracket > 0.0)) throw DomainError(no_root);
    return std::cbrt(numerator * std::pow(C::c, 4) / (K * mass_ratio2 * si.lambda * si.lambda * bracket));
}

DecoherenceReport restore_units(const DecoherenceReport& report, const UnitSystem& units) {
    if (units.mode == UnitMode::planck || report.units == UnitMode::si) return report;
    if (!units.si) throw ArgumentError("SI unit system needs its SI problem parameters");
    DecoherenceReport out = report;
    if (report.method == Method::closed_form) {
        const auto restored = gamma_closed_si(*units.si);
        out.gamma_velocity = restored.gamma_velocity;
        out.gamma_grav = restored.gamma_grav;
        out.gamma_mixed = restored.gamma_mixed;
        out.gamma_total = restored.gamma_total;
    }
    // quadrature rates are dimensionless already
    out.K = contract_K(IsotropicRank4::graviton(), units.si->mean_position, units.si->velocity);
    if (report.tau_dec) out.tau_dec = *report.tau_dec * C::planck_time();
    out.units = UnitMode::si;
    return out;
}

}  // namespace gravidec
