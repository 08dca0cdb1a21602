#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gravidec/quadrature.hpp"
#include "gravidec/stochastic.hpp"
#include "gravidec/units.hpp"

namespace gravidec::cli {

inline constexpr std::string_view kSchema = "gravidec/1";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;

// Schema violation. `field` is a dotted path into the document; `line` is 0
// when the field could not be located in the source text.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message, int line);

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

enum class Format { json, csv };

struct OutputSpec {
    Format format = Format::json;
    std::string path;
    int precision = 17;
};

struct KernelSpec {
    double t = 0.0;
    double t_prime = 0.0;
    bool full = false;
};

enum class GammaMethod { closed, quadrature, both };
enum class TauMethod { none, closed, root };

struct GammaSpec {
    GammaMethod method = GammaMethod::closed;
    TauMethod tau_dec = TauMethod::closed;
    // Adds a seeded Monte Carlo estimate of the graviton term (mc block settings).
    bool monte_carlo = false;
};

struct SweepSpec {
    std::string parameter;  // t_f, cutoff, beta_g, alpha, r, phi, gamma, beta
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool log_scale = false;
    GammaMethod method = GammaMethod::closed;  // closed or quadrature
    TauMethod tau_dec = TauMethod::none;

    [[nodiscard]] double value(int i) const;
};

enum class VerifyLevel { quick, full };

// Parsed configuration. `problem` is always in Planck units; in SI mode
// `units.si` keeps the SI description it was converted from.
struct RunConfig {
    std::optional<PlanckProblem> problem;
    UnitSystem units;
    QuadratureSpec quadrature;
    MCConfig mc;
    OutputSpec output;
    KernelSpec kernel;
    GammaSpec gamma;
    std::optional<SweepSpec> sweep;
    VerifyLevel verify = VerifyLevel::quick;
};

// Parses and validates a configuration document. The physics blocks (state,
// bath, path, particle) are required when `require_problem` is set. Throws
// ConfigError with line and field on any violation, before any computation.
[[nodiscard]] RunConfig parse_config(const std::string& text, bool require_problem = true);

// Worker count: GRAVIDEC_THREADS when set to a positive integer, else the
// hardware concurrency.
[[nodiscard]] unsigned worker_count();

struct CommandResult {
    std::string body;
    std::string metadata;  // sweep axis metadata (JSON); empty otherwise
    int exit_code = kExitOk;
};

[[nodiscard]] CommandResult run_kernel(const RunConfig& config);
[[nodiscard]] CommandResult run_gamma(const RunConfig& config);
[[nodiscard]] CommandResult run_tdec(const RunConfig& config);
[[nodiscard]] CommandResult run_sweep(const RunConfig& config);
[[nodiscard]] CommandResult run_verify(const RunConfig& config);

// Shortest %.*g-style text, independent of the global locale; non-finite
// values become "nan", "inf" or "-inf".
[[nodiscard]] std::string format_number(double v, int precision);

}  // namespace gravidec::cli
