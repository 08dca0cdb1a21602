#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace gravidec {

struct GaussNode {
    double x;  // positive abscissa on [-1, 1]
    double w;
};

// Orders with embedded 30-digit node tables.
inline constexpr std::array<int, 9> kGaussOrders{4, 8, 12, 16, 20, 24, 32, 48, 64};

// Positive half of the symmetric Gauss–Legendre rule of the given order.
// Throws ArgumentError for orders without an embedded table.
[[nodiscard]] std::span<const GaussNode> gauss_legendre_half(int order);

// Next embedded order above `order`, or `order` itself if it is the largest.
[[nodiscard]] int next_gauss_order(int order);

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_panels = std::size_t{1} << 16;
    int order = 16;
    // Upper bound on panel width; callers pass half the shortest period of an
    // oscillatory integrand.
    double max_panel_width = std::numeric_limits<double>::infinity();

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    // Integral of |f|, used to judge cancellation and tail decay.
    double abs_value = 0.0;
    std::size_t panels = 0;
};

using Integrand1D = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;

// Globally adaptive bisection with Gauss–Legendre per panel. The error of a panel
// is the difference between the rule on the panel and on its two halves.
// Throws ToleranceError when max_panels is exhausted.
[[nodiscard]] QuadratureResult integrate_1d(const Integrand1D& f, double a, double b, const QuadratureSpec& spec = {});

// ∫_a^∞ f for integrands decaying beyond decay_scale. Panels grow geometrically
// until a panel's |f| mass falls below tolerance. Throws DivergenceError when
// panel contributions stop shrinking.
[[nodiscard]] QuadratureResult integrate_semi_infinite(const Integrand1D& f, double a, double decay_scale,
                                                       const QuadratureSpec& spec = {});

// Tensor-product Gauss–Legendre over the rectangle [xb.front(), xb.back()] ×
// [yb.front(), yb.back()], split at every breakpoint, with dyadic refinement of
// the worst panel until the global tolerance is met.
[[nodiscard]] QuadratureResult integrate_2d_panel(const Integrand2D& f, std::span<const double> x_breaks,
                                                  std::span<const double> y_breaks, const QuadratureSpec& spec = {});

// Pairwise (tree) summation in fixed order.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

}  // namespace gravidec
