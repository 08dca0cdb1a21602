#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gravidec/cli.hpp"
#include "gravidec/errors.hpp"

namespace {

using namespace gravidec;
using namespace gravidec::cli;

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
};

int fail(int code, const std::string& message) {
    std::cerr << "gravidec: " << message << "\n";
    return code;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    return static_cast<bool>(f);
}

int run(const std::string& command, const Options& opt) {
    std::string text = "{\"schema\": \"gravidec/1\"}";
    if (!opt.config.empty()) {
        std::ifstream f(opt.config, std::ios::binary);
        if (!f) return fail(kExitConfig, "cannot read config file " + opt.config);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    } else if (command != "verify") {
        return fail(kExitConfig, "--config is required for " + command);
    }

    RunConfig cfg = parse_config(text, command != "verify");
    if (!opt.format.empty()) cfg.output.format = opt.format == "csv" ? Format::csv : Format::json;
    if (!opt.out.empty()) cfg.output.path = opt.out;
    if (opt.seed) cfg.mc.seed = *opt.seed;

    CommandResult result;
    if (command == "kernel") result = run_kernel(cfg);
    else if (command == "gamma") result = run_gamma(cfg);
    else if (command == "tdec") result = run_tdec(cfg);
    else if (command == "sweep") result = run_sweep(cfg);
    else result = run_verify(cfg);

    if (cfg.output.path.empty()) {
        std::cout << result.body << std::flush;
    } else {
        if (!write_file(cfg.output.path, result.body)) return fail(kExitConfig, "cannot write " + cfg.output.path);
        if (!result.metadata.empty() && !write_file(cfg.output.path + ".meta.json", result.metadata)) {
            return fail(kExitConfig, "cannot write " + cfg.output.path + ".meta.json");
        }
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gravitational decoherence kernels, rates and decoherence times"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"kernel", "gamma", "tdec", "sweep", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output file (stdout when absent)");
        sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { opt.seed = s; },
                                                "Monte Carlo seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, opt);
    } catch (const ConfigError& e) {
        return fail(kExitConfig, e.what());
    } catch (const ArgumentError& e) {
        return fail(kExitConfig, std::string("invalid argument: ") + e.what());
    } catch (const UnsupportedModeError& e) {
        return fail(kExitConfig, std::string("unsupported mode: ") + e.what());
    } catch (const DomainError& e) {
        return fail(kExitConfig, std::string("outside the domain: ") + e.what());
    } catch (const ToleranceError& e) {
        return fail(kExitNonConvergence, std::string("no convergence: ") + e.what());
    } catch (const DivergenceError& e) {
        return fail(kExitNonConvergence, std::string("divergent integral: ") + e.what());
    } catch (const BracketError& e) {
        return fail(kExitNonConvergence, std::string("no root bracket: ") + e.what());
    } catch (const SaturationError& e) {
        return fail(kExitNonConvergence, std::string("saturated: ") + e.what());
    } catch (const PsdError& e) {
        return fail(kExitNonConvergence, std::string("indefinite covariance: ") + e.what());
    }
}
