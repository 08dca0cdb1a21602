#include "gravidec/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gravidec/errors.hpp"

namespace gravidec {

namespace {

#include "series_tables.inc"

// The thermal series have radius π; 24 further powers keep (0.5/π)^26 < 1e-20.
constexpr int kThermalMinOrder = 24;

struct SeriesPart {
    SeriesId id;
    bool sine;  // multiplies sin φ instead of cos φ
};

struct ProfileInfo {
    Profile profile;
    std::string_view name;
    bool phase;
    bool kernel;
    int min_order;
    std::array<SeriesPart, 2> parts;
    int part_count;
};

constexpr std::array<ProfileInfo, kAllProfiles.size()> kProfiles{{
    {Profile::kernel, "kernel_profile", false, true, 0, {{{SeriesId::kernel_profile, false}, {}}}, 1},
    {Profile::phased_kernel, "phased_kernel_profile", true, true, 0,
     {{{SeriesId::kernel_profile, false}, {SeriesId::kernel_profile_sine, true}}}, 2},
    {Profile::thermal_kernel, "thermal_kernel_profile", false, true, kThermalMinOrder,
     {{{SeriesId::thermal_kernel_profile, false}, {}}}, 1},
    {Profile::rate, "rate_profile", false, false, 0, {{{SeriesId::rate_profile, false}, {}}}, 1},
    {Profile::thermal_rate, "thermal_rate_profile", false, false, kThermalMinOrder,
     {{{SeriesId::thermal_rate_profile, false}, {}}}, 1},
    {Profile::coherent_rate, "coherent_rate_profile", false, false, 0,
     {{{SeriesId::coherent_rate_profile, false}, {}}}, 1},
    {Profile::coherent_mixed, "coherent_mixed_profile", false, false, 0,
     {{{SeriesId::coherent_mixed_profile, false}, {}}}, 1},
    {Profile::squeezed_rate, "squeezed_rate_profile", true, false, 0,
     {{{SeriesId::squeezed_rate_cosine, false}, {SeriesId::squeezed_rate_sine, true}}}, 2},
    {Profile::squeezed_mixed, "squeezed_mixed_profile", true, false, 0,
     {{{SeriesId::squeezed_mixed_cosine, false}, {SeriesId::squeezed_mixed_sine, true}}}, 2},
}};

const ProfileInfo& info(Profile p) {
    for (const auto& i : kProfiles) {
        if (i.profile == p) return i;
    }
    throw ArgumentError("unknown profile");
}

int first_nonzero(std::span<const double> c) {
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0.0) return static_cast<int>(k);
    }
    return 0;
}

double series_value(const ProfileInfo& pi, double x, double phi, const SeriesPolicy& policy) {
    const int order = std::max(policy.series_order, pi.min_order);
    double sum = 0.0;
    for (int k = 0; k < pi.part_count; ++k) {
        const SeriesPart& part = pi.parts[static_cast<std::size_t>(k)];
        const double weight = pi.phase ? (part.sine ? std::sin(phi) : std::cos(phi)) : 1.0;
        if (weight == 0.0) continue;
        const auto c = frozen_series(part.id);
        const int lead = first_nonzero(c);
        const int last = std::min(lead + order, kMaxSeriesOrder);
        sum += weight * evaluate_polynomial(c, lead, last, x);
    }
    return sum;
}

// F and F(x; φ) written in inverse powers of x; algebraically the printed closed form.
double phased_kernel_closed(double x, double phi) {
    const double y = 1.0 / x;
    const double c = std::cos(x - phi);
    const double s = std::sin(x - phi);
    return y * (s + y * (5.0 * c + y * (-20.0 * s + y * (-60.0 * c + y * (120.0 * s + y * 120.0 * (c - std::cos(phi)))))));
}

double thermal_kernel_closed(double x) {
    const double ax = std::abs(x);
    // cosh and sinh in units of e^{|x|}/2 with q = e^{−2|x|}; 1 − q via expm1.
    const double q = std::exp(-2.0 * ax);
    const double one_minus_q = -std::expm1(-2.0 * ax);
    const double one_plus_q = 1.0 + q;
    const double num = 8.0 * q * std::pow(one_plus_q, 4) + 176.0 * q * q * one_plus_q * one_plus_q + 128.0 * q * q * q;
    const double x2 = ax * ax;
    return 1.0 / (x2 * x2 * x2) - num / (15.0 * std::pow(one_minus_q, 6));
}

double rate_closed(double x) {
    return 1.0 + (2.0 / (3.0 * x)) * (std::sin(x) - 8.0 * std::sin(0.5 * x)) +
           ((2.0 / 3.0) * std::cos(x) - (32.0 / 3.0) * std::cos(0.5 * x) + 10.0) / (x * x);
}

double thermal_rate_closed(double x) {
    // e^{4x} factored out of numerator and (e^{2x} − 1)²
    const double p = std::exp(-x);
    const double one_minus_p2 = -std::expm1(-2.0 * x);
    const double num = (((p + 16.0) * p + 26.0) * p + 16.0) * p + 1.0;
    return num / (one_minus_p2 * one_minus_p2) - 15.0 / (x * x);
}

double coherent_rate_closed(double x) {
    const double bracket = 1495.0 + 126.0 * x * x - 1728.0 * std::cos(0.5 * x) + 288.0 * std::cos(x) -
                           64.0 * std::cos(1.5 * x) + 9.0 * std::cos(2.0 * x) + 18.0 * x * std::sin(2.0 * x) -
                           96.0 * x * (9.0 * std::sin(0.5 * x) - 3.0 * std::sin(x) + std::sin(1.5 * x));
    return bracket / (1152.0 * x * x);
}

double coherent_mixed_closed(double x) {
    const double x2 = x * x;
    const double bracket = 441.0 + 2.0 * x2 * x2 * x2 + 216.0 * (x2 - 2.0) * std::cos(x) +
                           9.0 * (2.0 * x2 - 1.0) * std::cos(2.0 * x) -
                           36.0 * x * (12.0 - 2.0 * x2 + std::cos(x)) * std::sin(x);
    return bracket / (12.0 * x2 * x);
}

double squeezed_rate_closed(double x, double phi) {
    const double bracket = -576.0 * std::cos(0.5 * x - phi) + 216.0 * std::cos(x - phi) -
                           64.0 * std::cos(1.5 * x - phi) + 9.0 * std::cos(2.0 * x - phi) +
                           (18.0 * x * x + 415.0) * std::cos(phi) - 288.0 * x * std::sin(0.5 * x - phi) +
                           216.0 * x * std::sin(x - phi) - 96.0 * x * std::sin(1.5 * x - phi) +
                           18.0 * x * std::sin(2.0 * x - phi);
    return bracket / (x * x);
}

double squeezed_mixed_closed(double x, double phi) {
    const double x2 = x * x;
    const double bracket = 72.0 * (x2 - 2.0) * std::cos(x - phi) + (6.0 * x2 - 3.0) * std::cos(2.0 * x - phi) +
                           147.0 * std::cos(phi) - 144.0 * x * std::sin(x - phi) + 24.0 * x2 * x * std::sin(x - phi) -
                           6.0 * x * std::sin(2.0 * x - phi) - 4.0 * x2 * x * std::sin(phi);
    return bracket / (x2 * x);
}

double closed_value(Profile p, double x, double phi) {
    if (x == 0.0) throw DomainError(std::string(info(p).name) + ": closed form is singular at x = 0");
    switch (p) {
        case Profile::kernel: return phased_kernel_closed(std::abs(x), 0.0);
        case Profile::phased_kernel: return phased_kernel_closed(x, phi);
        case Profile::thermal_kernel: return thermal_kernel_closed(x);
        case Profile::rate: return rate_closed(x);
        case Profile::thermal_rate: return thermal_rate_closed(x);
        case Profile::coherent_rate: return coherent_rate_closed(x);
        case Profile::coherent_mixed: return coherent_mixed_closed(x);
        case Profile::squeezed_rate: return squeezed_rate_closed(x, phi);
        case Profile::squeezed_mixed: return squeezed_mixed_closed(x, phi);
    }
    throw ArgumentError("unknown profile");
}

void check_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) throw ArgumentError(std::string(what) + " must be positive and finite");
}

}  // namespace

void SeriesPolicy::validate() const {
    if (!std::isfinite(switchover_x) || !(switchover_x > 0.0)) throw ArgumentError("switchover_x must be positive");
    if (series_order < 0 || series_order > 36) throw ArgumentError("series_order must lie in 0..36");
    if (!(target_rel_err > 0.0)) throw ArgumentError("target_rel_err must be positive");
}

std::string_view profile_name(Profile p) { return info(p).name; }
bool profile_has_phase(Profile p) { return info(p).phase; }
bool profile_is_kernel(Profile p) { return info(p).kernel; }

std::span<const double> frozen_series(SeriesId id) {
    const auto index = static_cast<std::size_t>(id);
    if (index >= kFrozenSeries.size()) throw ArgumentError("unknown series id");
    return kFrozenSeries[index];
}

double evaluate_profile(Profile p, double x, double phi, Branch branch, const SeriesPolicy& policy) {
    const ProfileInfo& pi = info(p);
    if (!std::isfinite(x)) throw ArgumentError(std::string(pi.name) + ": argument must be finite");
    if (!pi.kernel && x < 0.0) throw ArgumentError(std::string(pi.name) + ": argument must be >= 0");
    if (pi.phase && !std::isfinite(phi)) throw ArgumentError(std::string(pi.name) + ": phase must be finite");
    switch (branch) {
        case Branch::closed_form: return closed_value(p, x, phi);
        case Branch::series: return series_value(pi, x, phi, policy);
        case Branch::automatic: break;
    }
    policy.validate();
    return std::abs(x) < policy.switchover_x ? series_value(pi, x, phi, policy) : closed_value(p, x, phi);
}

double kernel_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::kernel, x, 0.0, Branch::automatic, policy);
}
double phased_kernel_profile(double x, double phi, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::phased_kernel, x, phi, Branch::automatic, policy);
}
double thermal_kernel_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::thermal_kernel, x, 0.0, Branch::automatic, policy);
}
double rate_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::rate, x, 0.0, Branch::automatic, policy);
}
double thermal_rate_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::thermal_rate, x, 0.0, Branch::automatic, policy);
}
double coherent_rate_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::coherent_rate, x, 0.0, Branch::automatic, policy);
}
double coherent_mixed_profile(double x, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::coherent_mixed, x, 0.0, Branch::automatic, policy);
}
double squeezed_rate_profile(double x, double phi, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::squeezed_rate, x, phi, Branch::automatic, policy);
}
double squeezed_mixed_profile(double x, double phi, const SeriesPolicy& policy) {
    return evaluate_profile(Profile::squeezed_mixed, x, phi, Branch::automatic, policy);
}

double kappa_constant(StateKind kind, const InternalBath& bath, const GravitonState& state, double m0) {
    check_positive(m0, "m0");
    check_positive(bath.beta, "bath beta");
    state.validate();
    if (kind != StateKind::vacuum && kind != state.kind()) {
        throw ArgumentError("requested the " + std::string(state_name(kind)) + " constant for a " +
                            std::string(state_name(state.kind())) + " state");
    }
    const double pi = std::numbers::pi;
    const double base = bath.gamma * pi / (m0 * m0 * bath.beta);
    switch (kind) {
        case StateKind::vacuum: return base * state.cutoff / 108.0;
        case StateKind::thermal: return 4.0 * pi * base / (189.0 * state.thermal_params().beta_g);
        case StateKind::coherent: return base * state.state_cutoff / 192.0;
        case StateKind::squeezed: return 1.5 * base * state.state_cutoff;
    }
    throw ArgumentError("unknown state kind");
}

}  // namespace gravidec
