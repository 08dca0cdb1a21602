#include "gravidec/kernels.hpp"

#include <cmath>
#include <numbers>

#include "gravidec/errors.hpp"

namespace gravidec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_inputs(const GravitonState& state, double m0) {
    state.validate();
    if (!std::isfinite(m0) || !(m0 > 0.0)) throw ArgumentError("m0 must be positive and finite");
}

double pow6(double x) {
    const double x2 = x * x;
    return x2 * x2 * x2;
}

double vacuum_amplitude(double m0, double cutoff) { return m0 * m0 * pow6(cutoff) / (15.0 * kPi); }

}  // namespace

double noise_scalar(const GravitonState& state, double m0, double t, double t_prime, const SeriesPolicy& policy) {
    check_inputs(state, m0);
    const double lag = t - t_prime;
    const double sum = t + t_prime;
    const double vacuum = vacuum_amplitude(m0, state.cutoff) * kernel_profile(state.cutoff * lag, policy);

    switch (state.kind()) {
        case StateKind::vacuum: return vacuum;
        case StateKind::thermal: {
            const double beta_g = state.thermal_params().beta_g;
            return vacuum + 8.0 * m0 * m0 * std::pow(kPi, 5) / pow6(beta_g) *
                                thermal_kernel_profile(kPi * lag / beta_g, policy);
        }
        case StateKind::coherent: {
            const double alpha = state.coherent_params().alpha;
            const double c = state.state_cutoff;
            return vacuum + 0.5 * alpha * alpha * vacuum_amplitude(m0, c) *
                                (kernel_profile(c * lag, policy) + kernel_profile(c * sum, policy));
        }
        case StateKind::squeezed: {
            const auto& s = state.squeezed_params();
            const double c = state.state_cutoff;
            return std::cosh(2.0 * s.r) * vacuum -
                   vacuum_amplitude(m0, c) * std::sinh(2.0 * s.r) * phased_kernel_profile(c * sum, s.phi, policy);
        }
    }
    throw ArgumentError("unknown state kind");
}

KernelSample noise_kernel(const GravitonState& state, double m0, double t, double t_prime,
                          const SeriesPolicy& policy) {
    return {noise_scalar(state, m0, t, t_prime, policy), IsotropicRank4::graviton(), t, t_prime};
}

double noise_equal_time(const GravitonState& state, double m0, double t, const SeriesPolicy& policy) {
    check_inputs(state, m0);
    const double vacuum = vacuum_amplitude(m0, state.cutoff) * kernel_profile(0.0, policy);

    switch (state.kind()) {
        case StateKind::vacuum: return vacuum;
        case StateKind::thermal: {
            const double beta_g = state.thermal_params().beta_g;
            return vacuum + 8.0 * m0 * m0 * std::pow(kPi, 5) / pow6(beta_g) * thermal_kernel_profile(0.0, policy);
        }
        case StateKind::coherent: {
            const double alpha = state.coherent_params().alpha;
            const double c = state.state_cutoff;
            return vacuum + 0.5 * alpha * alpha * vacuum_amplitude(m0, c) *
                                (kernel_profile(0.0, policy) + kernel_profile(2.0 * c * t, policy));
        }
        case StateKind::squeezed: {
            const auto& s = state.squeezed_params();
            const double c = state.state_cutoff;
            return std::cosh(2.0 * s.r) * vacuum -
                   vacuum_amplitude(m0, c) * std::sinh(2.0 * s.r) * phased_kernel_profile(2.0 * c * t, s.phi, policy);
        }
    }
    throw ArgumentError("unknown state kind");
}

double white_noise_weight(const InternalBath& bath) {
    bath.validate();
    return kPi * bath.lambda * bath.lambda * bath.gamma / bath.beta;
}

std::variant<double, DeltaWeight> n_int(const InternalBath& bath, double t, double t_prime,
                                        const QuadratureSpec& spec) {
    bath.validate();
    if (bath.white_noise()) return DeltaWeight{white_noise_weight(bath)};

    const double prefactor = 0.5 * bath.lambda * bath.lambda * bath.gamma;
    if (prefactor == 0.0) return 0.0;
    const double cutoff = std::get<FullIntegral>(bath.mode).cutoff_int;
    const double lag = std::abs(t - t_prime);
    const double beta = bath.beta;
    // ϖ coth(ϖβ/2) = ϖ + 2ϖ/(e^{ϖβ} − 1), which tends to 2/β at ϖ = 0
    const auto integrand = [=](double w) {
        const double thermal = (w == 0.0) ? 2.0 / beta : 2.0 * w / std::expm1(w * beta);
        return (w + thermal) * std::cos(w * lag);
    };
    QuadratureSpec s = spec;
    if (lag > 0.0) s.max_panel_width = std::min(s.max_panel_width, kPi / lag);
    return prefactor * integrate_1d(integrand, 0.0, cutoff, s).value;
}

}  // namespace gravidec
