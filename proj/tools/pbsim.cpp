// Command-line front end.
//
//   pbsim run <config> [--out DIR] [--section.key value]...
//   pbsim print-config <config> [--section.key value]...
//   pbsim version
//
// Any flag whose name contains a dot overrides the matching config key
// one-for-one (e.g. --params.kappa2 3 --space.dim 24). Worker count comes
// from the PBSIM_WORKERS environment variable (default: all cores).
//
// Exit codes: 0 success, 1 configuration/usage error, 2 solver failure.
#include "pbsim/config.hpp"
#include "pbsim/io.hpp"
#include "pbsim/tasks.hpp"
#include "pbsim/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

// Pull "--a.b[=v] [v]" style tokens out of argv before CLI11 sees them.
std::vector<pbsim::ConfigOverride> extract_overrides(std::vector<std::string>& args) {
    std::vector<pbsim::ConfigOverride> overrides;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg.rfind("--", 0) == 0 && arg.find('.') != std::string::npos) {
            const std::string body = arg.substr(2);
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                overrides.push_back({body.substr(0, eq), body.substr(eq + 1)});
            } else {
                if (i + 1 >= args.size())
                    throw pbsim::ValidationError("override --" + body + " needs a value");
                overrides.push_back({body, args[++i]});
            }
        } else {
            rest.push_back(arg);
        }
    }
    args = std::move(rest);
    return overrides;
}

int env_workers() {
    if (const char* env = std::getenv("PBSIM_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<pbsim::ConfigOverride> overrides;
    try {
        overrides = extract_overrides(args);
    } catch (const pbsim::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }

    CLI::App app{"photon-blockade steady-state and correlation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;

    auto* run = app.add_subcommand("run", "execute the task described by a config file");
    run->add_option("config", config_path, "config file path")->required();
    run->add_option("--out", out_dir, "output directory (created if missing)");
    run->add_flag("--quiet", quiet, "suppress progress lines");

    auto* print = app.add_subcommand("print-config",
                                     "parse a config (with overrides) and print the "
                                     "canonical serialization");
    print->add_option("config", config_path, "config file path")->required();

    auto* version = app.add_subcommand("version", "print the version");

    try {
        std::vector<const char*> cargs;
        cargs.push_back("pbsim");
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (version->parsed()) {
        std::cout << pbsim::kVersion << "\n";
        return 0;
    }

    std::string text;
    try {
        text = pbsim::read_file(config_path);
    } catch (const pbsim::Error& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    }

    try {
        const pbsim::ExperimentConfig config = pbsim::parse_config(text, overrides);
        if (print->parsed()) {
            std::cout << pbsim::serialize_config(config);
            return 0;
        }
        pbsim::RunOptions options;
        options.out_dir = out_dir;
        options.workers = env_workers();
        options.quiet = quiet;
        return pbsim::run_task(config, options);
    } catch (const pbsim::ParseError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const pbsim::ValidationError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const pbsim::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
