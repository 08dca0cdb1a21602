#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <thread>

#include "gravidec/cli.hpp"
#include "gravidec/errors.hpp"
#include "json.hpp"

namespace gravidec::cli {

namespace {

using nlohmann::json;

std::string where(const std::string& field, int line) {
    return line > 0 ? field + " (line " + std::to_string(line) + ")" : field;
}

// Line of the last key of a dotted field path, found by walking the quoted
// keys in document order. 0 when any key is missing.
int locate(const std::string& text, const std::string& field) {
    std::size_t pos = 0;
    std::size_t start = 0;
    bool found = false;
    while (start <= field.size()) {
        const std::size_t dot = field.find('.', start);
        const std::string key = field.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        const std::size_t at = text.find('"' + key + '"', pos);
        if (at == std::string::npos) return 0;
        pos = at;
        found = true;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!found) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Block {
public:
    Block(const json& j, std::string path, const std::string& text) : j_(j), path_(std::move(path)), text_(text) {}

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const std::string field = key.empty() ? path_ : (path_.empty() ? key : path_ + "." + key);
        throw ConfigError(field, message, locate(text_, field));
    }

    void allow(std::initializer_list<std::string_view> keys) const {
        for (const auto& item : j_.items()) {
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) fail(item.key(), "unknown key");
        }
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

    [[nodiscard]] Block child(const char* key) const {
        const json& c = j_.at(key);
        if (!c.is_object()) fail(key, "must be an object");
        return {c, path_.empty() ? key : path_ + "." + key, text_};
    }

    [[nodiscard]] double number(const char* key) const {
        if (!has(key)) fail(key, "required number is missing");
        const json& v = j_.at(key);
        if (!v.is_number()) fail(key, "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    [[nodiscard]] double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    [[nodiscard]] double positive(const char* key) const {
        const double d = number(key);
        if (!(d > 0.0)) fail(key, "must be positive");
        return d;
    }

    [[nodiscard]] double non_negative(const char* key) const {
        const double d = number(key);
        if (d < 0.0) fail(key, "must be non-negative");
        return d;
    }

    [[nodiscard]] long long integer_or(const char* key, long long fallback, long long lo, long long hi) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(key, "must be an integer");
        const long long i = v.get<long long>();
        if (i < lo || i > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return i;
    }

    [[nodiscard]] std::uint64_t unsigned_or(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        fail(key, "must be a non-negative integer");
    }

    [[nodiscard]] bool boolean_or(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!j_.at(key).is_boolean()) fail(key, "must be true or false");
        return j_.at(key).get<bool>();
    }

    [[nodiscard]] std::string string_or(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        if (!j_.at(key).is_string()) fail(key, "must be a string");
        return j_.at(key).get<std::string>();
    }

    [[nodiscard]] std::string choice(const char* key, const std::string& fallback,
                                     std::initializer_list<std::string_view> options) const {
        const std::string s = string_or(key, fallback);
        if (std::find(options.begin(), options.end(), s) == options.end()) {
            std::string list;
            for (const auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
            fail(key, "must be one of: " + list);
        }
        return s;
    }

    [[nodiscard]] Vec3 vec(const char* key) const {
        if (!has(key)) fail(key, "required 3-vector is missing");
        const json& v = j_.at(key);
        if (!v.is_array() || v.size() != 3) fail(key, "must be an array of three numbers");
        double c[3];
        for (std::size_t i = 0; i < 3; ++i) {
            if (!v[i].is_number()) fail(key, "must be an array of three numbers");
            c[i] = v[i].get<double>();
            if (!std::isfinite(c[i])) fail(key, "components must be finite");
        }
        return {c[0], c[1], c[2]};
    }

    [[nodiscard]] Vec3 vec_or(const char* key, Vec3 fallback) const { return has(key) ? vec(key) : fallback; }

private:
    const json& j_;
    std::string path_;
    const std::string& text_;
};

GammaMethod gamma_method(const std::string& s) {
    if (s == "closed") return GammaMethod::closed;
    if (s == "quadrature") return GammaMethod::quadrature;
    return GammaMethod::both;
}

TauMethod tau_method(const std::string& s) {
    if (s == "none") return TauMethod::none;
    if (s == "closed") return TauMethod::closed;
    return TauMethod::root;
}

// Physics blocks. Planck mode reads inverse temperatures, SI mode reads kelvin.
void parse_problem(const Block& root, RunConfig& cfg, bool si) {
    for (const char* key : {"state", "bath", "path", "particle"}) {
        if (!root.has(key)) root.fail(key, "required block is missing");
    }
    const Block state = root.child("state");
    const Block bath = root.child("bath");
    const Block path = root.child("path");
    const Block particle = root.child("particle");

    const std::string kind_name = state.choice("kind", "", {"vacuum", "thermal", "coherent", "squeezed"});
    const StateKind kind = state_from_name(kind_name);
    const char* thermal_key = si ? "T_g" : "beta_g";
    switch (kind) {
        case StateKind::vacuum: state.allow({"kind", "cutoff"}); break;
        case StateKind::thermal: state.allow({"kind", "cutoff", thermal_key}); break;
        case StateKind::coherent: state.allow({"kind", "cutoff", "alpha", "state_cutoff"}); break;
        case StateKind::squeezed: state.allow({"kind", "cutoff", "r", "phi", "state_cutoff"}); break;
    }
    const double cutoff = state.positive("cutoff");
    const double state_cutoff = state.has("state_cutoff") ? state.positive("state_cutoff") : 0.0;
    const double thermal_value = kind == StateKind::thermal ? state.positive(thermal_key) : 0.0;
    const double alpha = kind == StateKind::coherent ? state.number("alpha") : 0.0;
    const double r = kind == StateKind::squeezed ? state.non_negative("r") : 0.0;
    const double phi = kind == StateKind::squeezed ? state.number_or("phi", 0.0) : 0.0;

    const char* temperature_key = si ? "T" : "beta";
    const std::string mode = bath.choice("mode", "white", {"white", "full"});
    if (mode == "full") {
        bath.allow({"lambda", "gamma", temperature_key, "mode", "cutoff_int"});
    } else {
        bath.allow({"lambda", "gamma", temperature_key, "mode"});
    }
    const double lambda = bath.non_negative("lambda");
    const double gamma = bath.non_negative("gamma");
    const double temperature = bath.positive(temperature_key);
    const double cutoff_int = mode == "full" ? bath.positive("cutoff_int") : 0.0;

    path.allow({"t_f", "velocity", "mean_position", "mean_velocity"});
    particle.allow({"m0"});
    const double m0 = particle.positive("m0");

    SIProblem s;
    s.kind = kind;
    s.m0 = m0;
    s.cutoff = cutoff;
    s.state_cutoff = state_cutoff;
    s.graviton_temperature = thermal_value;
    s.alpha = alpha;
    s.r = r;
    s.phi = phi;
    s.lambda = lambda;
    s.gamma = gamma;
    s.bath_temperature = temperature;
    s.bath_cutoff = cutoff_int;
    s.mean_position = path.vec("mean_position");
    s.velocity = path.vec("velocity");
    s.mean_velocity = path.vec_or("mean_velocity", {});
    s.t_f = path.positive("t_f");

    if (si) {
        cfg.units = UnitSystem{UnitMode::si, s};
        cfg.problem = to_planck(s);
        return;
    }
    PlanckProblem p;
    switch (kind) {
        case StateKind::vacuum: p.state = GravitonState::vacuum(cutoff); break;
        case StateKind::thermal: p.state = GravitonState::thermal(cutoff, thermal_value); break;
        case StateKind::coherent: p.state = GravitonState::coherent(cutoff, alpha, state_cutoff); break;
        case StateKind::squeezed: p.state = GravitonState::squeezed(cutoff, r, phi, state_cutoff); break;
    }
    p.bath.lambda = lambda;
    p.bath.gamma = gamma;
    p.bath.beta = temperature;
    if (mode == "full") {
        p.bath.mode = FullIntegral{cutoff_int};
    } else {
        p.bath.mode = WhiteNoise{};
    }
    p.path.mean_position = s.mean_position;
    p.path.velocity = s.velocity;
    p.path.mean_velocity = s.mean_velocity;
    p.path.t_f = s.t_f;
    p.m0 = m0;
    cfg.problem = p;
}

void parse_sweep(const Block& sweep, RunConfig& cfg, bool si) {
    sweep.allow({"parameter", "min", "max", "count", "scale", "method", "tau_dec"});
    SweepSpec s;
    s.parameter = si ? sweep.choice("parameter", "", {"t_f", "cutoff", "T_g", "alpha", "r", "phi", "gamma", "T"})
                     : sweep.choice("parameter", "", {"t_f", "cutoff", "beta_g", "alpha", "r", "phi", "gamma", "beta"});
    s.min = sweep.number("min");
    s.max = sweep.number("max");
    s.count = static_cast<int>(sweep.integer_or("count", 0, 2, 1000000));
    if (!sweep.has("count")) sweep.fail("count", "required integer is missing");
    s.log_scale = sweep.choice("scale", "linear", {"linear", "log"}) == "log";
    s.method = gamma_method(sweep.choice("method", "closed", {"closed", "quadrature"}));
    s.tau_dec = tau_method(sweep.choice("tau_dec", "none", {"none", "closed", "root"}));
    if (!(s.min < s.max)) sweep.fail("max", "must exceed min");
    if (s.log_scale && !(s.min > 0.0)) sweep.fail("min", "log scale needs a positive minimum");

    const std::string& p = s.parameter;
    const bool strictly_positive = p == "t_f" || p == "cutoff" || p == "beta_g" || p == "beta" || p == "T_g" || p == "T";
    if (strictly_positive && !(s.min > 0.0)) sweep.fail("min", p + " must stay positive");
    if ((p == "gamma" || p == "r") && s.min < 0.0) sweep.fail("min", p + " must stay non-negative");
    if (cfg.problem) {
        const StateKind kind = cfg.problem->state.kind();
        const bool thermal_only = p == "beta_g" || p == "T_g";
        if ((thermal_only && kind != StateKind::thermal) || (p == "alpha" && kind != StateKind::coherent) ||
            ((p == "r" || p == "phi") && kind != StateKind::squeezed)) {
            sweep.fail("parameter", p + " is not a parameter of the " + std::string(state_name(kind)) + " state");
        }
    }
    cfg.sweep = s;
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message, int line)
    : std::runtime_error("config error: " + where(field, line) + ": " + message), field_(field), line_(line) {}

double SweepSpec::value(int i) const {
    if (i == 0) return min;
    if (i == count - 1) return max;
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    if (log_scale) return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    return min + f * (max - min);
}

RunConfig parse_config(const std::string& text, bool require_problem) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = std::min(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what(), line);
    }
    if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object", 1);

    const Block root(doc, "", text);
    root.allow({"schema", "units", "state", "bath", "path", "particle", "quadrature", "mc", "output", "kernel", "gamma",
                "sweep", "verify"});
    if (!root.has("schema")) root.fail("schema", "required field is missing");
    if (root.string_or("schema", "") != kSchema) root.fail("schema", "must be \"" + std::string(kSchema) + "\"");

    RunConfig cfg;
    bool si = false;
    if (root.has("units")) {
        const Block units = root.child("units");
        units.allow({"mode"});
        si = units.choice("mode", "planck", {"planck", "si"}) == "si";
    }

    try {
        if (require_problem || root.has("state")) parse_problem(root, cfg, si);
    } catch (const ArgumentError& e) {
        throw ConfigError("<physics>", e.what(), 0);
    }

    if (root.has("quadrature")) {
        const Block q = root.child("quadrature");
        q.allow({"rel_tol", "abs_tol", "max_panels", "order"});
        cfg.quadrature.rel_tol = q.has("rel_tol") ? q.positive("rel_tol") : cfg.quadrature.rel_tol;
        cfg.quadrature.abs_tol = q.has("abs_tol") ? q.positive("abs_tol") : cfg.quadrature.abs_tol;
        cfg.quadrature.max_panels = static_cast<std::size_t>(q.integer_or("max_panels", 1 << 16, 4, 1LL << 30));
        cfg.quadrature.order = static_cast<int>(q.integer_or("order", 16, 4, 64));
        if (std::find(kGaussOrders.begin(), kGaussOrders.end(), cfg.quadrature.order) == kGaussOrders.end()) {
            q.fail("order", "must be one of the embedded Gauss-Legendre orders");
        }
    }
    if (root.has("mc")) {
        const Block m = root.child("mc");
        m.allow({"n_steps", "n_samples", "seed", "psd_jitter"});
        cfg.mc.n_steps = static_cast<int>(m.integer_or("n_steps", 64, 8, 4096));
        cfg.mc.n_samples = static_cast<std::size_t>(m.integer_or("n_samples", 10000, 100, 100000000));
        cfg.mc.seed = m.unsigned_or("seed", 0);
        cfg.mc.psd_jitter = m.has("psd_jitter") ? m.non_negative("psd_jitter") : cfg.mc.psd_jitter;
    }
    if (root.has("output")) {
        const Block o = root.child("output");
        o.allow({"format", "path", "precision"});
        cfg.output.format = o.choice("format", "json", {"json", "csv"}) == "csv" ? Format::csv : Format::json;
        cfg.output.path = o.string_or("path", "");
        cfg.output.precision = static_cast<int>(o.integer_or("precision", 17, 1, 17));
    }
    if (root.has("kernel")) {
        const Block k = root.child("kernel");
        k.allow({"t", "t_prime", "full"});
        cfg.kernel.t = k.number_or("t", 0.0);
        cfg.kernel.t_prime = k.number_or("t_prime", 0.0);
        cfg.kernel.full = k.boolean_or("full", false);
    }
    if (root.has("gamma")) {
        const Block g = root.child("gamma");
        g.allow({"method", "tau_dec", "monte_carlo"});
        cfg.gamma.method = gamma_method(g.choice("method", "closed", {"closed", "quadrature", "both"}));
        cfg.gamma.tau_dec = tau_method(g.choice("tau_dec", "closed", {"none", "closed", "root"}));
        cfg.gamma.monte_carlo = g.boolean_or("monte_carlo", false);
    }
    if (root.has("sweep")) parse_sweep(root.child("sweep"), cfg, si);
    if (root.has("verify")) {
        const Block v = root.child("verify");
        v.allow({"level"});
        cfg.verify = v.choice("level", "quick", {"quick", "full"}) == "full" ? VerifyLevel::full : VerifyLevel::quick;
    }
    return cfg;
}

unsigned worker_count() {
    if (const char* env = std::getenv("GRAVIDEC_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gravidec::cli
