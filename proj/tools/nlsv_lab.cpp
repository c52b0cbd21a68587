#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nlsv-lab: resonance scans, normal-form checks, generation sets, toy model and cascade runs"};
    app.require_subcommand(1);
    std::string config_path, out = "out";
    std::uint64_t seed = 1;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out, "output directory");
    app.add_flag("--quiet", quiet, "no progress output");

    std::function<int(const lab::Context&)> run;
    auto leaf = [&](CLI::App* parent, const char* name, const char* help, int (*fn)(const lab::Context&)) {
        auto* s = parent->add_subcommand(name, help);
        s->fallthrough();
        s->callback([&run, fn] { run = fn; });
        return s;
    };
    leaf(&app, "resonance-scan", "classify every tuple of a box", lab::resonance_scan);
    leaf(&app, "nf-check", "normal-form cancellation identity and |F| bound", lab::nf_check);
    auto* lam = app.add_subcommand("lambda", "generation sets");
    lam->require_subcommand(1);
    lam->fallthrough();
    leaf(lam, "build", "construct a base set", lab::lambda_build);
    leaf(lam, "verify", "check a set against the conditions", lab::lambda_verify);
    leaf(lam, "certify", "blow up a base set and verify it against a potential", lab::lambda_certify);
    auto* toy = app.add_subcommand("toy", "finite toy model");
    toy->require_subcommand(1);
    toy->fallthrough();
    leaf(toy, "run", "integrate a toy state", lab::toy_run);
    leaf(toy, "slider", "search for the mass-transfer orbit", lab::toy_slider);
    auto* cas = app.add_subcommand("cascade", "approximation and growth experiment");
    cas->require_subcommand(1);
    cas->fallthrough();
    leaf(cas, "run", "single lambda", lab::cascade_run);
    leaf(cas, "sweep", "several lambdas and the deviation scaling", lab::cascade_sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    lab::Context ctx;
    ctx.seed = seed;
    ctx.out = out;
    ctx.quiet = quiet;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw lab::ConfigError("cannot open config " + config_path);
            try {
                ctx.config = nlsv::json::parse(in);
            } catch (const nlsv::json::exception& e) {
                throw lab::ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
        } else {
            ctx.config = nlsv::json::object();
        }
        if (!ctx.config.is_object()) throw lab::ConfigError("config must be a JSON object");
        return run(ctx);
    } catch (const lab::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
