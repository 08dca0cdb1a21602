#include "gravidec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gravidec/errors.hpp"

namespace gravidec {

namespace {

#include "gauss_legendre_tables.inc"

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Panel errors never drop below this multiple of the rounding level of |f| mass.
constexpr double kRoundoffFactor = 50.0;

struct RuleSum {
    double value = 0.0;
    double abs = 0.0;
};

RuleSum apply_rule(const Integrand1D& f, std::span<const GaussNode> half, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    RuleSum s;
    for (const auto& n : half) {
        const double f1 = f(mid - rad * n.x);
        const double f2 = f(mid + rad * n.x);
        s.value += n.w * (f1 + f2);
        s.abs += n.w * (std::abs(f1) + std::abs(f2));
    }
    s.value *= rad;
    s.abs *= std::abs(rad);
    return s;
}

RuleSum apply_rule(const Integrand2D& f, std::span<const GaussNode> half, double x0, double x1, double y0,
                   double y1) {
    const double xm = 0.5 * (x0 + x1), xr = 0.5 * (x1 - x0);
    const double ym = 0.5 * (y0 + y1), yr = 0.5 * (y1 - y0);
    RuleSum s;
    for (const auto& nx : half) {
        for (const double xs : {xm - xr * nx.x, xm + xr * nx.x}) {
            double row = 0.0;
            double row_abs = 0.0;
            for (const auto& ny : half) {
                const double f1 = f(xs, ym - yr * ny.x);
                const double f2 = f(xs, ym + yr * ny.x);
                row += ny.w * (f1 + f2);
                row_abs += ny.w * (std::abs(f1) + std::abs(f2));
            }
            s.value += nx.w * row;
            s.abs += nx.w * row_abs;
        }
    }
    s.value *= xr * yr;
    s.abs *= std::abs(xr * yr);
    return s;
}

double roundoff_floor(double abs_mass) { return kRoundoffFactor * kEps * abs_mass; }

double panel_error(double coarse, double fine, double abs_mass) {
    return std::max(std::abs(coarse - fine), roundoff_floor(abs_mass));
}

std::size_t tile_count(double width, double max_width) {
    if (!std::isfinite(max_width) || width <= max_width) return 1;
    return static_cast<std::size_t>(std::ceil(width / max_width));
}

struct Panel1 {
    double a, b;
    double coarse;
    RuleSum left, right;
    double err;

    [[nodiscard]] double value() const { return left.value + right.value; }
    [[nodiscard]] double abs() const { return left.abs + right.abs; }
};

Panel1 make_panel(const Integrand1D& f, std::span<const GaussNode> half, double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    Panel1 p{a, b, coarse, apply_rule(f, half, a, m), apply_rule(f, half, m, b), 0.0};
    p.err = panel_error(p.coarse, p.value(), p.abs());
    return p;
}

struct Panel2 {
    double x0, x1, y0, y1;
    double coarse;
    std::array<RuleSum, 4> quad;  // (lo,lo) (lo,hi) (hi,lo) (hi,hi)
    double err;

    [[nodiscard]] double value() const { return quad[0].value + quad[1].value + quad[2].value + quad[3].value; }
    [[nodiscard]] double abs() const { return quad[0].abs + quad[1].abs + quad[2].abs + quad[3].abs; }
};

Panel2 make_panel(const Integrand2D& f, std::span<const GaussNode> half, double x0, double x1, double y0, double y1,
                  double coarse) {
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    Panel2 p{x0, x1, y0, y1, coarse, {}, 0.0};
    p.quad[0] = apply_rule(f, half, x0, xm, y0, ym);
    p.quad[1] = apply_rule(f, half, x0, xm, ym, y1);
    p.quad[2] = apply_rule(f, half, xm, x1, y0, ym);
    p.quad[3] = apply_rule(f, half, xm, x1, ym, y1);
    p.err = panel_error(p.coarse, p.value(), p.abs());
    return p;
}

template <typename Panel>
bool worse(const Panel& lhs, const Panel& rhs) {
    if (lhs.err != rhs.err) return lhs.err < rhs.err;
    return lhs.coarse < rhs.coarse;
}

// Refines the worst panel until the summed error meets tolerance.
template <typename Panel, typename Split>
QuadratureResult refine(std::vector<Panel> panels, const QuadratureSpec& spec, Split split,
                        const char* what) {
    const auto cmp = [](const Panel& l, const Panel& r) { return worse(l, r); };
    std::make_heap(panels.begin(), panels.end(), cmp);

    // Panels whose error is pure roundoff are settled: splitting them cannot help.
    std::vector<Panel> settled;
    const auto totals = [&panels, &settled]() {
        std::vector<double> values, errors, masses;
        for (const auto* group : {&settled, &panels}) {
            for (const auto& p : *group) {
                values.push_back(p.value());
                errors.push_back(p.err);
                masses.push_back(p.abs());
            }
        }
        return std::array<double, 3>{pairwise_sum(values), pairwise_sum(errors), pairwise_sum(masses)};
    };
    const auto count = [&]() { return panels.size() + settled.size(); };

    double value = 0.0, error = 0.0;
    for (const auto& p : panels) {
        value += p.value();
        error += p.err;
    }
    while (true) {
        if (error <= std::max(spec.rel_tol * std::abs(value), spec.abs_tol)) {
            const auto [v, e, m] = totals();
            if (e <= std::max(spec.rel_tol * std::abs(v), spec.abs_tol)) {
                return {v, e, m, count()};
            }
            value = v;
            error = e;
        }
        if (panels.empty()) {
            const auto [v, e, m] = totals();
            throw ToleranceError(std::string(what) + ": roundoff limits the error to " + std::to_string(e), v, e);
        }
        if (count() >= spec.max_panels) {
            const auto [v, e, m] = totals();
            throw ToleranceError(std::string(what) + ": panel budget exhausted (" + std::to_string(count()) +
                                     " panels)",
                                 v, e);
        }
        std::pop_heap(panels.begin(), panels.end(), cmp);
        const Panel worst = panels.back();
        panels.pop_back();
        if (worst.err <= roundoff_floor(worst.abs())) {
            settled.push_back(worst);
            continue;
        }
        value -= worst.value();
        error -= worst.err;
        for (auto& child : split(worst)) {
            value += child.value();
            error += child.err;
            panels.push_back(child);
            std::push_heap(panels.begin(), panels.end(), cmp);
        }
    }
}

void check_breaks(std::span<const double> breaks, const char* axis) {
    if (breaks.size() < 2) {
        throw ArgumentError(std::string("need at least two breakpoints on ") + axis);
    }
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        if (!std::isfinite(breaks[i])) throw ArgumentError(std::string("non-finite breakpoint on ") + axis);
        if (i > 0 && breaks[i] < breaks[i - 1]) {
            throw ArgumentError(std::string("breakpoints not sorted on ") + axis);
        }
    }
}

}  // namespace

std::span<const GaussNode> gauss_legendre_half(int order) {
    switch (order) {
        case 4: return kGauss4;
        case 8: return kGauss8;
        case 12: return kGauss12;
        case 16: return kGauss16;
        case 20: return kGauss20;
        case 24: return kGauss24;
        case 32: return kGauss32;
        case 48: return kGauss48;
        case 64: return kGauss64;
        default: throw ArgumentError("no embedded Gauss-Legendre rule of order " + std::to_string(order));
    }
}

int next_gauss_order(int order) {
    for (const int o : kGaussOrders) {
        if (o > order) return o;
    }
    return kGaussOrders.back();
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ArgumentError("quadrature tolerances must be positive");
    if (max_panels < 4) throw ArgumentError("max_panels must be at least 4");
    if (!(max_panel_width > 0.0)) throw ArgumentError("max_panel_width must be positive");
    (void)gauss_legendre_half(order);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (const double v : values) s += v;
        return s;
    }
    const std::size_t mid = values.size() / 2;
    return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

QuadratureResult integrate_1d(const Integrand1D& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw ArgumentError("integrate_1d needs finite a <= b");
    }
    if (a == b) return {};
    const auto half = gauss_legendre_half(spec.order);

    const std::size_t tiles = tile_count(b - a, spec.max_panel_width);
    if (tiles > spec.max_panels) {
        throw ToleranceError("integrate_1d: oscillation cap needs more panels than allowed", 0.0,
                             std::numeric_limits<double>::infinity());
    }
    std::vector<Panel1> panels;
    panels.reserve(tiles);
    const double h = (b - a) / static_cast<double>(tiles);
    for (std::size_t i = 0; i < tiles; ++i) {
        const double lo = a + h * static_cast<double>(i);
        const double hi = (i + 1 == tiles) ? b : a + h * static_cast<double>(i + 1);
        panels.push_back(make_panel(f, half, lo, hi, apply_rule(f, half, lo, hi).value));
    }

    const auto split = [&](const Panel1& p) {
        const double m = 0.5 * (p.a + p.b);
        return std::array<Panel1, 2>{make_panel(f, half, p.a, m, p.left.value),
                                     make_panel(f, half, m, p.b, p.right.value)};
    };
    return refine(std::move(panels), spec, split, "integrate_1d");
}

QuadratureResult integrate_semi_infinite(const Integrand1D& f, double a, double decay_scale,
                                         const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !(decay_scale > 0.0) || !std::isfinite(decay_scale)) {
        throw ArgumentError("integrate_semi_infinite needs finite a and positive decay_scale");
    }
    constexpr int kMaxTailPanels = 120;
    constexpr int kGrowthLimit = 4;

    QuadratureSpec inner = spec;
    inner.abs_tol = spec.abs_tol * 0.1;

    std::vector<double> values;
    double error = 0.0;
    double mass = 0.0;
    std::size_t panels = 0;
    double lo = a;
    double width = decay_scale;
    double previous_mass = -1.0;
    int growth_run = 0;
    int quiet_run = 0;

    for (int k = 0; k < kMaxTailPanels; ++k) {
        const double hi = lo + width;
        const QuadratureResult r = integrate_1d(f, lo, hi, inner);
        values.push_back(r.value);
        error += r.error;
        mass += r.abs_value;
        panels += r.panels;

        const double running = std::abs(pairwise_sum(values));
        const double tol = std::max(spec.abs_tol, spec.rel_tol * running);
        if (lo >= a + decay_scale) {
            growth_run = (r.abs_value >= previous_mass) ? growth_run + 1 : 0;
            if (growth_run >= kGrowthLimit) {
                throw DivergenceError("integrate_semi_infinite: tail panels are not shrinking beyond x = " +
                                      std::to_string(lo));
            }
            quiet_run = (r.abs_value <= 0.1 * tol) ? quiet_run + 1 : 0;
            if (quiet_run >= 2) {
                return {pairwise_sum(values), error + r.abs_value, mass, panels};
            }
        }
        previous_mass = r.abs_value;
        lo = hi;
        width *= 2.0;
    }
    throw DivergenceError("integrate_semi_infinite: tail did not decay within the panel limit");
}

QuadratureResult integrate_2d_panel(const Integrand2D& f, std::span<const double> x_breaks,
                                    std::span<const double> y_breaks, const QuadratureSpec& spec) {
    spec.validate();
    check_breaks(x_breaks, "x");
    check_breaks(y_breaks, "y");
    const auto half = gauss_legendre_half(spec.order);

    std::vector<Panel2> panels;
    for (std::size_t i = 0; i + 1 < x_breaks.size(); ++i) {
        const double xa = x_breaks[i], xb = x_breaks[i + 1];
        if (xa == xb) continue;
        const std::size_t nx = tile_count(xb - xa, spec.max_panel_width);
        for (std::size_t j = 0; j + 1 < y_breaks.size(); ++j) {
            const double ya = y_breaks[j], yb = y_breaks[j + 1];
            if (ya == yb) continue;
            const std::size_t ny = tile_count(yb - ya, spec.max_panel_width);
            if (panels.size() + nx * ny > spec.max_panels) {
                throw ToleranceError("integrate_2d_panel: oscillation cap needs more panels than allowed", 0.0,
                                     std::numeric_limits<double>::infinity());
            }
            const double hx = (xb - xa) / static_cast<double>(nx);
            const double hy = (yb - ya) / static_cast<double>(ny);
            for (std::size_t p = 0; p < nx; ++p) {
                const double x0 = xa + hx * static_cast<double>(p);
                const double x1 = (p + 1 == nx) ? xb : xa + hx * static_cast<double>(p + 1);
                for (std::size_t q = 0; q < ny; ++q) {
                    const double y0 = ya + hy * static_cast<double>(q);
                    const double y1 = (q + 1 == ny) ? yb : ya + hy * static_cast<double>(q + 1);
                    panels.push_back(make_panel(f, half, x0, x1, y0, y1, apply_rule(f, half, x0, x1, y0, y1).value));
                }
            }
        }
    }
    if (panels.empty()) return {};

    const auto split = [&](const Panel2& p) {
        const double xm = 0.5 * (p.x0 + p.x1), ym = 0.5 * (p.y0 + p.y1);
        return std::array<Panel2, 4>{make_panel(f, half, p.x0, xm, p.y0, ym, p.quad[0].value),
                                     make_panel(f, half, p.x0, xm, ym, p.y1, p.quad[1].value),
                                     make_panel(f, half, xm, p.x1, p.y0, ym, p.quad[2].value),
                                     make_panel(f, half, xm, p.x1, ym, p.y1, p.quad[3].value)};
    };
    return refine(std::move(panels), spec, split, "integrate_2d_panel");
}

}  // namespace gravidec
