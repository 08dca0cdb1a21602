#include "gravidec/decoherence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gravidec/errors.hpp"
#include "gravidec/kernels.hpp"

namespace gravidec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mass(double m0) {
    if (!std::isfinite(m0) || !(m0 > 0.0)) throw ArgumentError("m0 must be positive and finite");
}

// Profile on the unit interval; the path profile is t_f times this.
double unit_profile(double u) { return u <= 0.5 ? u : 1.0 - u; }

double unit_sign(double u) { return u <= 0.5 ? 1.0 : -1.0; }

struct Term {
    double value = 0.0;
    double error = 0.0;
};

constexpr std::array<double, 2> kFirstHalf{0.0, 0.5};
constexpr std::array<double, 2> kSecondHalf{0.5, 1.0};

// ∫∫ over [0,1]² as the two diagonal blocks plus twice the off-diagonal block.
// The integrand must be symmetric under u ↔ u'.
Term symmetric_square(const Integrand2D& f, const QuadratureSpec& spec) {
    const auto a = integrate_2d_panel(f, kFirstHalf, kFirstHalf, spec);
    const auto b = integrate_2d_panel(f, kSecondHalf, kSecondHalf, spec);
    const auto c = integrate_2d_panel(f, kFirstHalf, kSecondHalf, spec);
    return {a.value + b.value + 2.0 * c.value, a.error + b.error + 2.0 * c.error};
}

Term split_line(const Integrand1D& f, const QuadratureSpec& spec) {
    const auto a = integrate_1d(f, 0.0, 0.5, spec);
    const auto b = integrate_1d(f, 0.5, 1.0, spec);
    return {a.value + b.value, a.error + b.error};
}

// Typical size of the graviton kernel; divides integrands so abs_tol stays meaningful.
double kernel_scale(const GravitonState& state, double m0) {
    return noise_equal_time(GravitonState::vacuum(state.cutoff), m0, 0.0) + std::abs(noise_equal_time(state, m0, 0.0));
}

double bath_kernel(const InternalBath& bath, double lag, const QuadratureSpec& inner) {
    return std::get<double>(n_int(bath, lag, 0.0, inner));
}

struct ClosedParts {
    double grav = 0.0;
    double mixed = 0.0;
};

ClosedParts closed_parts(const GravitonState& state, const InternalBath& bath, double t_f, double m0, double K,
                         const SeriesPolicy& policy) {
    const double lam2 = bath.lambda * bath.lambda;
    const double cutoff = state.cutoff;
    const double x = cutoff * t_f;
    const double vac_pref = 8.0 * m0 * m0 * cutoff * cutoff * K / (5.0 * kPi);
    const double kappa = kappa_constant(StateKind::vacuum, bath, state, m0);
    ClosedParts p{vac_pref * rate_profile(x, policy), vac_pref * lam2 * kappa * x * x * x};

    switch (state.kind()) {
        case StateKind::vacuum: break;
        case StateKind::thermal: {
            const double beta_g = state.thermal_params().beta_g;
            const double y = kPi * t_f / beta_g;
            const double pref = 16.0 * m0 * m0 * kPi * K / (15.0 * beta_g * beta_g);
            const double kappa_th = kappa_constant(StateKind::thermal, bath, state, m0);
            p.grav += pref * thermal_rate_profile(y, policy);
            p.mixed += pref * lam2 * kappa_th * y * y * y;
            break;
        }
        case StateKind::coherent: {
            const double alpha = state.coherent_params().alpha;
            const double c = state.state_cutoff;
            const double z = c * t_f;
            const double pref = 128.0 * m0 * m0 * alpha * alpha * c * c * K / (15.0 * kPi);
            const double kappa_coh = kappa_constant(StateKind::coherent, bath, state, m0);
            p.grav += pref * coherent_rate_profile(z, policy);
            p.mixed += pref * lam2 * kappa_coh * coherent_mixed_profile(z, policy);
            break;
        }
        case StateKind::squeezed: {
            const auto& s = state.squeezed_params();
            const double c = state.state_cutoff;
            const double z = c * t_f;
            const double pref = 2.0 * m0 * m0 * c * c * K * std::sinh(2.0 * s.r) / (135.0 * kPi);
            const double kappa_sq = kappa_constant(StateKind::squeezed, bath, state, m0);
            const double ch = std::cosh(2.0 * s.r);
            p.grav = ch * p.grav - pref * squeezed_rate_profile(z, s.phi, policy);
            p.mixed = ch * p.mixed - pref * lam2 * kappa_sq * squeezed_mixed_profile(z, s.phi, policy);
            break;
        }
    }
    return p;
}

DecoherenceReport make_report(Method method, const SuperpositionPath& path) {
    DecoherenceReport r;
    r.method = method;
    r.K = path.K();
    if (!(r.K > 0.0)) {
        r.warnings.emplace_back("K <= 0: the graviton and mixed terms vanish or change sign for this geometry");
    }
    return r;
}

void finish(DecoherenceReport& r) { r.gamma_total = r.gamma_velocity + r.gamma_grav + r.gamma_mixed; }

}  // namespace

double SuperpositionPath::profile(double t) const { return t <= 0.5 * t_f ? t : t_f - t; }

Vec3 SuperpositionPath::separation(double t) const { return (2.0 * profile(t)) * velocity; }

Vec3 SuperpositionPath::velocity_difference(double t) const {
    return (t <= 0.5 * t_f ? 2.0 : -2.0) * velocity;
}

double SuperpositionPath::K() const { return contract_K(IsotropicRank4::graviton(), mean_position, velocity); }

SuperpositionPath SuperpositionPath::with_duration(double t) const {
    SuperpositionPath p = *this;
    p.t_f = t;
    return p;
}

void SuperpositionPath::validate() const {
    if (!std::isfinite(t_f) || !(t_f > 0.0)) throw ArgumentError("path t_f must be positive and finite");
    if (!velocity.is_finite() || !mean_position.is_finite() || !mean_velocity.is_finite()) {
        throw ArgumentError("path vectors must be finite");
    }
}

std::string_view method_name(Method m) { return m == Method::closed_form ? "closed_form" : "quadrature"; }

DecoherenceReport gamma_closed(const GravitonState& state, const InternalBath& bath, const SuperpositionPath& path,
                               double m0, const SeriesPolicy& policy) {
    state.validate();
    bath.validate();
    path.validate();
    check_mass(m0);
    if (!bath.white_noise()) {
        throw UnsupportedModeError("closed forms assume a white-noise bath; use gamma_quadrature for FullIntegral");
    }
    auto r = make_report(Method::closed_form, path);
    const auto parts = closed_parts(state, bath, path.t_f, m0, r.K, policy);
    r.gamma_grav = parts.grav;
    r.gamma_mixed = parts.mixed;
    const double vv = dot(path.mean_velocity, path.velocity);
    r.gamma_velocity = 4.0 * white_noise_weight(bath) * vv * vv * path.t_f;
    finish(r);
    return r;
}

DecoherenceReport gamma_quadrature(const GravitonState& state, const InternalBath& bath,
                                   const SuperpositionPath& path, double m0, const QuadratureSpec& quad) {
    state.validate();
    bath.validate();
    path.validate();
    check_mass(m0);
    quad.validate();
    auto r = make_report(Method::quadrature, path);

    const double t_f = path.t_f;
    const double freq = state.max_frequency();
    const double user_width = quad.max_panel_width / t_f;
    const bool white = bath.white_noise();
    const double bath_cutoff = white ? 0.0 : std::get<FullIntegral>(bath.mode).cutoff_int;
    const bool bath_on = bath.lambda > 0.0 && bath.gamma > 0.0;

    QuadratureSpec inner = quad;
    inner.max_panel_width = std::numeric_limits<double>::infinity();
    const double bath_scale = (white || !bath_on) ? 1.0 : std::abs(bath_kernel(bath, 0.0, inner));

    // velocity term
    const double vv = dot(path.mean_velocity, path.velocity);
    if (white) {
        r.gamma_velocity = 4.0 * white_noise_weight(bath) * vv * vv * t_f;
    } else if (bath_on && vv != 0.0) {
        QuadratureSpec s = quad;
        s.max_panel_width = std::min(user_width, kPi / (bath_cutoff * t_f));
        const auto f = [&](double u, double up) {
            return unit_sign(u) * unit_sign(up) * bath_kernel(bath, t_f * (u - up), inner) / bath_scale;
        };
        const Term t = symmetric_square(f, s);
        const double scale = 4.0 * vv * vv * t_f * t_f * bath_scale;
        r.gamma_velocity = scale * t.value;
        r.error_velocity = scale * t.error;
    }

    if (r.K == 0.0) {
        finish(r);
        return r;
    }
    const double ref = kernel_scale(state, m0);

    // graviton term: 8𝒦 ∫∫ w w' s
    {
        QuadratureSpec s = quad;
        s.max_panel_width = std::min(user_width, kPi / (freq * t_f));
        const auto f = [&](double u, double up) {
            return unit_profile(u) * unit_profile(up) * noise_scalar(state, m0, t_f * u, t_f * up) / ref;
        };
        const Term t = symmetric_square(f, s);
        const double scale = 8.0 * r.K * std::pow(t_f, 4) * ref;
        r.gamma_grav = scale * t.value;
        r.error_grav = std::abs(scale) * t.error;
    }

    // mixed term: (16𝒦/m0²) ∫∫ w w' N_int s, or its white-noise collapse onto t = t'
    if (bath_on) {
        if (white) {
            QuadratureSpec s = quad;
            s.max_panel_width = std::min(user_width, kPi / (2.0 * freq * t_f));
            const auto f = [&](double u) {
                const double w = unit_profile(u);
                return w * w * noise_equal_time(state, m0, t_f * u) / ref;
            };
            const Term t = split_line(f, s);
            const double scale = 16.0 * white_noise_weight(bath) * r.K * std::pow(t_f, 3) * ref / (m0 * m0);
            r.gamma_mixed = scale * t.value;
            r.error_mixed = std::abs(scale) * t.error;
        } else {
            QuadratureSpec s = quad;
            s.max_panel_width = std::min(user_width, kPi / (std::max(freq, bath_cutoff) * t_f));
            const auto f = [&](double u, double up) {
                return unit_profile(u) * unit_profile(up) * bath_kernel(bath, t_f * (u - up), inner) / bath_scale *
                       noise_scalar(state, m0, t_f * u, t_f * up) / ref;
            };
            const Term t = symmetric_square(f, s);
            const double scale = 16.0 * r.K * std::pow(t_f, 4) * ref * bath_scale / (m0 * m0);
            r.gamma_mixed = scale * t.value;
            r.error_mixed = std::abs(scale) * t.error;
        }
    }
    finish(r);
    return r;
}

double tau_dec_closed(const GravitonState& state, const InternalBath& bath, double m0, double K) {
    state.validate();
    bath.validate();
    check_mass(m0);
    if (!std::isfinite(K)) throw ArgumentError("K must be finite");
    const char* no_root = "no finite tau_dec in small-x approximation";
    if (!(K > 0.0) || !(bath.lambda > 0.0)) throw DomainError(no_root);

    const double lam2 = bath.lambda * bath.lambda;
    const double cutoff5 = std::pow(state.cutoff, 5);
    const double kappa = kappa_constant(StateKind::vacuum, bath, state, m0);
    double numerator = 0.0;
    double bracket = 0.0;
    switch (state.kind()) {
        case StateKind::vacuum:
            numerator = 5.0 * kPi / 8.0;
            bracket = kappa * cutoff5;
            break;
        case StateKind::thermal: {
            const double t_g = 1.0 / state.thermal_params().beta_g;
            numerator = 15.0 * kPi / 8.0;
            bracket = 3.0 * kappa * cutoff5 +
                      2.0 * std::pow(kPi, 5) * kappa_constant(StateKind::thermal, bath, state, m0) * std::pow(t_g, 5);
            break;
        }
        case StateKind::coherent: {
            const double alpha = state.coherent_params().alpha;
            numerator = 45.0 * kPi / 8.0;
            bracket = 9.0 * kappa * cutoff5 + 16.0 * alpha * alpha *
                                                  kappa_constant(StateKind::coherent, bath, state, m0) *
                                                  std::pow(state.state_cutoff, 5);
            break;
        }
        case StateKind::squeezed: {
            const double r = state.squeezed_params().r;
            numerator = 405.0 * kPi / 4.0;
            bracket = 162.0 * kappa * cutoff5 * std::cosh(2.0 * r) -
                      kappa_constant(StateKind::squeezed, bath, state, m0) * std::pow(state.state_cutoff, 5) *
                          std::sinh(2.0 * r);
            break;
        }
    }
    if (!(bracket > 0.0)) throw DomainError(no_root);
    return std::cbrt(numerator / (K * m0 * m0 * lam2 * bracket));
}

double tau_dec_root(const GravitonState& state, const InternalBath& bath, const SuperpositionPath& path_template,
                    double m0, double tol) {
    state.validate();
    bath.validate();
    check_mass(m0);
    if (!(tol > 0.0)) throw ArgumentError("tau_dec_root tolerance must be positive");
    if (!bath.white_noise()) throw UnsupportedModeError("tau_dec_root uses the white-noise closed forms");
    const double K = path_template.K();
    const auto gamma = [&](double t) {
        const auto p = closed_parts(state, bath, t, m0, K, SeriesPolicy{});
        return p.grav + p.mixed;
    };

    constexpr int kMaxSteps = 400;
    double lo = 1.0 / state.max_frequency();
    double g_lo = gamma(lo);
    for (int i = 0; g_lo >= 0.1; ++i) {
        if (i == kMaxSteps || lo == 0.0) throw BracketError("tau_dec_root: no t with Gamma < 0.1", lo, lo, g_lo, g_lo);
        lo *= 0.5;
        g_lo = gamma(lo);
    }
    double hi = lo;
    double g_hi = g_lo;
    for (int i = 0; !(g_hi > 1.0); ++i) {
        if (i == kMaxSteps || !std::isfinite(g_hi)) {
            throw BracketError("tau_dec_root: Gamma never exceeds 1 on the bracket", lo, hi, g_lo, g_hi);
        }
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = gamma(hi);
    }

    std::uintmax_t max_iter = 200;
    const auto f = [&](double t) { return gamma(t) - 1.0; };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, g_lo - 1.0, g_hi - 1.0,
                                                          boost::math::tools::eps_tolerance<double>(50), max_iter);
    const double fa = std::abs(f(a));
    const double fb = std::abs(f(b));
    const double root = fa <= fb ? a : b;
    const double residual = std::min(fa, fb);
    if (residual > tol) throw ToleranceError("tau_dec_root: residual above tolerance", root, residual);
    return root;
}

}  // namespace gravidec
