#pragma once

#include <stdexcept>
#include <string>

namespace gravidec {

// Invalid input to a library call (bad index, non-unit vector, missing parameter).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the domain where a result exists.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation not defined for the requested bath or state mode.
class UnsupportedModeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A numerical engine could not reach its tolerance. Carries the best estimate.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double estimate, double residual)
        : std::runtime_error(what), estimate_(estimate), residual_(residual) {}

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double estimate_;
    double residual_;
};

// Tail contributions of a semi-infinite integral did not shrink.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root bracket search failed; values at the last bracket endpoints are kept.
class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, double t_lo, double t_hi, double f_lo, double f_hi)
        : std::runtime_error(what), t_lo_(t_lo), t_hi_(t_hi), f_lo_(f_lo), f_hi_(f_hi) {}

    [[nodiscard]] double t_lo() const noexcept { return t_lo_; }
    [[nodiscard]] double t_hi() const noexcept { return t_hi_; }
    [[nodiscard]] double f_lo() const noexcept { return f_lo_; }
    [[nodiscard]] double f_hi() const noexcept { return f_hi_; }

private:
    double t_lo_, t_hi_, f_lo_, f_hi_;
};

// Covariance is indefinite beyond the allowed jitter.
class PsdError : public std::runtime_error {
public:
    PsdError(const std::string& what, double min_eigenvalue, double max_eigenvalue)
        : std::runtime_error(what), min_(min_eigenvalue), max_(max_eigenvalue) {}

    [[nodiscard]] double min_eigenvalue() const noexcept { return min_; }
    [[nodiscard]] double max_eigenvalue() const noexcept { return max_; }

private:
    double min_, max_;
};

// Ensemble average of cos(phase) is non-positive, so -log is undefined.
class SaturationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gravidec
