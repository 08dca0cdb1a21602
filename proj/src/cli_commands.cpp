#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "gravidec/cli.hpp"
#include "gravidec/decoherence.hpp"
#include "gravidec/errors.hpp"
#include "gravidec/kernels.hpp"
#include "gravidec/stochastic.hpp"
#include "json.hpp"

namespace gravidec::cli {

namespace {

using ojson = nlohmann::ordered_json;

// The value of the formatted text, so that JSON output honours the precision.
ojson number(double v, int precision) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v, precision).c_str(), nullptr);
}

ojson header(const char* command, const RunConfig& cfg) {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = command;
    if (cfg.problem) j["state"] = state_name(cfg.problem->state.kind());
    j["units"] = cfg.units.mode == UnitMode::si ? "si" : "planck";
    return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

const PlanckProblem& problem_of(const RunConfig& cfg) {
    if (!cfg.problem) throw ConfigError("state", "this command needs the state, bath, path and particle blocks", 0);
    return *cfg.problem;
}

DecoherenceReport evaluate(const PlanckProblem& p, const UnitSystem& units, Method method, const QuadratureSpec& quad) {
    const DecoherenceReport r = method == Method::closed_form ? gamma_closed(p.state, p.bath, p.path, p.m0)
                                                              : gamma_quadrature(p.state, p.bath, p.path, p.m0, quad);
    return restore_units(r, units);
}

struct TauOutcome {
    std::optional<double> value;
    std::string status = "ok";
    std::string message;
};

// Domain errors become a status; bracket failures too when `tolerate_bracket`.
TauOutcome tau_dec(const PlanckProblem& p, const UnitSystem& units, TauMethod method, bool tolerate_bracket) {
    TauOutcome out;
    const bool si = units.mode == UnitMode::si;
    try {
        if (method == TauMethod::closed) {
            out.value = si ? tau_dec_closed_si(*units.si) : tau_dec_closed(p.state, p.bath, p.m0, p.path.K());
        } else {
            const double t = tau_dec_root(p.state, p.bath, p.path, p.m0);
            out.value = si ? t * PhysicalConstants::planck_time() : t;
        }
    } catch (const DomainError& e) {
        out.status = "no_finite_tau_dec";
        out.message = e.what();
    } catch (const BracketError& e) {
        if (!tolerate_bracket) throw;
        out.status = "no_bracket";
        out.message = e.what();
    }
    return out;
}

ojson tau_record(const TauOutcome& t, TauMethod method, int precision) {
    ojson j;
    j["method"] = method == TauMethod::closed ? "closed" : "root";
    j["status"] = t.status;
    j["value"] = t.value ? number(*t.value, precision) : ojson(nullptr);
    if (!t.message.empty()) j["message"] = t.message;
    return j;
}

ojson report_record(const DecoherenceReport& r, int precision) {
    ojson j;
    j["method"] = method_name(r.method);
    j["gamma_velocity"] = number(r.gamma_velocity, precision);
    j["gamma_grav"] = number(r.gamma_grav, precision);
    j["gamma_mixed"] = number(r.gamma_mixed, precision);
    j["gamma_total"] = number(r.gamma_total, precision);
    j["error_velocity"] = number(r.error_velocity, precision);
    j["error_grav"] = number(r.error_grav, precision);
    j["error_mixed"] = number(r.error_mixed, precision);
    j["K"] = number(r.K, precision);
    j["warnings"] = r.warnings;
    return j;
}

double relative_discrepancy(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string optional_field(const std::optional<double>& v, int precision) {
    return v ? format_number(*v, precision) : std::string();
}

struct SweepPoint {
    PlanckProblem problem;
    UnitSystem units;
};

SweepPoint sweep_point(const RunConfig& cfg, const std::string& name, double v) {
    if (cfg.units.mode == UnitMode::si) {
        SIProblem s = *cfg.units.si;
        if (name == "t_f") s.t_f = v;
        else if (name == "cutoff") s.cutoff = v;
        else if (name == "T_g") s.graviton_temperature = v;
        else if (name == "alpha") s.alpha = v;
        else if (name == "r") s.r = v;
        else if (name == "phi") s.phi = v;
        else if (name == "gamma") s.gamma = v;
        else if (name == "T") s.bath_temperature = v;
        else throw ConfigError("sweep.parameter", "not an SI sweep parameter: " + name, 0);
        return {to_planck(s), UnitSystem{UnitMode::si, s}};
    }
    PlanckProblem p = *cfg.problem;
    GravitonState& st = p.state;
    if (name == "t_f") {
        p.path.t_f = v;
    } else if (name == "cutoff") {
        // a state cutoff that was not set separately follows the cutoff
        if (st.state_cutoff == st.cutoff) st.state_cutoff = v;
        st.cutoff = v;
    } else if (name == "beta_g") {
        st = GravitonState::thermal(st.cutoff, v);
    } else if (name == "alpha") {
        st = GravitonState::coherent(st.cutoff, v, st.state_cutoff);
    } else if (name == "r") {
        st = GravitonState::squeezed(st.cutoff, v, st.squeezed_params().phi, st.state_cutoff);
    } else if (name == "phi") {
        st = GravitonState::squeezed(st.cutoff, st.squeezed_params().r, v, st.state_cutoff);
    } else if (name == "gamma") {
        p.bath.gamma = v;
    } else if (name == "beta") {
        p.bath.beta = v;
    } else {
        throw ConfigError("sweep.parameter", "not a sweep parameter: " + name, 0);
    }
    return {p, cfg.units};
}

struct SweepRow {
    double param = 0.0;
    DecoherenceReport report;
    std::optional<double> tau;
};

// Evaluates every point on a pool of workers; rows land in sweep order and the
// first failure in that order is rethrown, so output never depends on scheduling.
std::vector<SweepRow> evaluate_sweep(const RunConfig& cfg, const SweepSpec& sweep) {
    const auto n = static_cast<std::size_t>(sweep.count);
    std::vector<SweepRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const Method method = sweep.method == GammaMethod::quadrature ? Method::quadrature : Method::closed_form;
    const auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const double v = sweep.value(static_cast<int>(i));
                const SweepPoint pt = sweep_point(cfg, sweep.parameter, v);
                rows[i].param = v;
                rows[i].report = evaluate(pt.problem, pt.units, method, cfg.quadrature);
                if (sweep.tau_dec != TauMethod::none) {
                    rows[i].tau = tau_dec(pt.problem, pt.units, sweep.tau_dec, true).value;
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

const char* tau_name(TauMethod m) {
    switch (m) {
        case TauMethod::none: return "none";
        case TauMethod::closed: return "closed";
        case TauMethod::root: return "root";
    }
    return "none";
}

}  // namespace

std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return {buf, res.ptr};
}

CommandResult run_kernel(const RunConfig& cfg) {
    const PlanckProblem& p = problem_of(cfg);
    const KernelSample k = noise_kernel(p.state, p.m0, cfg.kernel.t, cfg.kernel.t_prime);
    const int prec = cfg.output.precision;
    CommandResult out;
    if (cfg.output.format == Format::csv) {
        out.body = "t,t_prime,scalar,a,b\n" + format_number(k.t, prec) + "," + format_number(k.t_prime, prec) + "," +
                   format_number(k.scalar, prec) + "," + format_number(k.tensor.a, prec) + "," +
                   format_number(k.tensor.b, prec) + "\n";
        return out;
    }
    ojson j = header("kernel", cfg);
    j["units"] = "planck";  // the kernel is always reported in Planck units
    j["t"] = number(k.t, prec);
    j["t_prime"] = number(k.t_prime, prec);
    j["scalar"] = number(k.scalar, prec);
    j["tensor"] = {{"a", number(k.tensor.a, prec)}, {"b", number(k.tensor.b, prec)}};
    if (cfg.kernel.full) {
        ojson comps = ojson::array();
        for (const double c : k.full()) comps.push_back(number(c, prec));
        j["components"] = comps;
    }
    out.body = dump(j);
    return out;
}

CommandResult run_gamma(const RunConfig& cfg) {
    const PlanckProblem& p = problem_of(cfg);
    const int prec = cfg.output.precision;
    std::vector<DecoherenceReport> reports;
    if (cfg.gamma.method != GammaMethod::quadrature) reports.push_back(evaluate(p, cfg.units, Method::closed_form, cfg.quadrature));
    if (cfg.gamma.method != GammaMethod::closed) reports.push_back(evaluate(p, cfg.units, Method::quadrature, cfg.quadrature));
    std::optional<TauOutcome> tau;
    if (cfg.gamma.tau_dec != TauMethod::none) tau = tau_dec(p, cfg.units, cfg.gamma.tau_dec, false);

    std::optional<GammaEstimate> mc;
    double discrete = 0.0;
    if (cfg.gamma.monte_carlo) {
        MCConfig mcc = cfg.mc;
        mcc.threads = worker_count();
        const auto cov = build_covariance(p.state, p.m0, TimeGrid{p.path.t_f, mcc.n_steps});
        discrete = discrete_gamma(cov, p.path);
        mc = estimate_gamma(sample_field(cov, mcc), p.path);
    }

    CommandResult out;
    if (cfg.output.format == Format::csv) {
        out.body = "method,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec\n";
        for (const auto& r : reports) {
            out.body += std::string(method_name(r.method)) + "," + format_number(r.gamma_velocity, prec) + "," +
                        format_number(r.gamma_grav, prec) + "," + format_number(r.gamma_mixed, prec) + "," +
                        format_number(r.gamma_total, prec) + "," + optional_field(tau ? tau->value : std::nullopt, prec) +
                        "\n";
        }
        if (mc) out.body += "monte_carlo,," + format_number(mc->gamma, prec) + ",,,\n";
        return out;
    }
    ojson j = header("gamma", cfg);
    ojson list = ojson::array();
    for (const auto& r : reports) list.push_back(report_record(r, prec));
    j["reports"] = list;
    if (reports.size() == 2) {
        const auto& a = reports[0];
        const auto& b = reports[1];
        j["discrepancy"] = {{"gamma_velocity", number(relative_discrepancy(a.gamma_velocity, b.gamma_velocity), prec)},
                            {"gamma_grav", number(relative_discrepancy(a.gamma_grav, b.gamma_grav), prec)},
                            {"gamma_mixed", number(relative_discrepancy(a.gamma_mixed, b.gamma_mixed), prec)},
                            {"gamma_total", number(relative_discrepancy(a.gamma_total, b.gamma_total), prec)}};
    }
    if (tau) j["tau_dec"] = tau_record(*tau, cfg.gamma.tau_dec, prec);
    if (mc) {
        j["monte_carlo"] = {{"gamma_grav", number(mc->gamma, prec)},
                            {"std_error", number(mc->std_error, prec)},
                            {"discrete_target", number(discrete, prec)},
                            {"mean_sin", number(mc->mean_sin, prec)},
                            {"n_samples", mc->n_samples},
                            {"n_steps", cfg.mc.n_steps},
                            {"seed", cfg.mc.seed}};
    }
    out.body = dump(j);
    return out;
}

CommandResult run_tdec(const RunConfig& cfg) {
    const PlanckProblem& p = problem_of(cfg);
    const int prec = cfg.output.precision;
    const TauOutcome closed = tau_dec(p, cfg.units, TauMethod::closed, false);
    const TauOutcome root = tau_dec(p, cfg.units, TauMethod::root, false);
    std::optional<double> diff;
    if (closed.value && root.value) diff = std::abs(*root.value - *closed.value) / std::abs(*closed.value);

    CommandResult out;
    if (cfg.output.format == Format::csv) {
        out.body = "closed,root,relative_difference\n" + optional_field(closed.value, prec) + "," +
                   optional_field(root.value, prec) + "," + optional_field(diff, prec) + "\n";
        return out;
    }
    ojson j = header("tdec", cfg);
    j["closed"] = tau_record(closed, TauMethod::closed, prec);
    j["root"] = tau_record(root, TauMethod::root, prec);
    j["relative_difference"] = diff ? number(*diff, prec) : ojson(nullptr);
    out.body = dump(j);
    return out;
}

CommandResult run_sweep(const RunConfig& cfg) {
    problem_of(cfg);
    if (!cfg.sweep) throw ConfigError("sweep", "the sweep command needs a sweep block", 0);
    const SweepSpec& s = *cfg.sweep;
    const int prec = cfg.output.precision;
    const auto rows = evaluate_sweep(cfg, s);

    CommandResult out;
    if (cfg.output.format == Format::csv) {
        out.body = "param,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec\n";
        for (const auto& r : rows) {
            out.body += format_number(r.param, prec) + "," + format_number(r.report.gamma_velocity, prec) + "," +
                        format_number(r.report.gamma_grav, prec) + "," + format_number(r.report.gamma_mixed, prec) +
                        "," + format_number(r.report.gamma_total, prec) + "," + optional_field(r.tau, prec) + "\n";
        }
    } else {
        ojson j = header("sweep", cfg);
        j["parameter"] = s.parameter;
        ojson list = ojson::array();
        for (const auto& r : rows) {
            list.push_back({{"param", number(r.param, prec)},
                            {"gamma_velocity", number(r.report.gamma_velocity, prec)},
                            {"gamma_grav", number(r.report.gamma_grav, prec)},
                            {"gamma_mixed", number(r.report.gamma_mixed, prec)},
                            {"gamma_total", number(r.report.gamma_total, prec)},
                            {"tau_dec", r.tau ? number(*r.tau, prec) : ojson(nullptr)}});
        }
        j["rows"] = list;
        out.body = dump(j);
    }

    ojson meta = header("sweep", cfg);
    meta["parameter"] = s.parameter;
    meta["scale"] = s.log_scale ? "log" : "linear";
    meta["min"] = number(s.min, prec);
    meta["max"] = number(s.max, prec);
    meta["count"] = s.count;
    meta["method"] = s.method == GammaMethod::quadrature ? "quadrature" : "closed";
    meta["tau_dec"] = tau_name(s.tau_dec);
    meta["columns"] = {"param", "gamma_velocity", "gamma_grav", "gamma_mixed", "gamma_total", "tau_dec"};
    out.metadata = dump(meta);
    return out;
}

}  // namespace gravidec::cli
