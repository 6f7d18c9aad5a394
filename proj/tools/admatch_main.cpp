#include "admatch/errors.hpp"
#include "admatch/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"attributable-event estimation on daily series via propensity-score matching"};
    app.require_subcommand(1);

    std::string config_path;
    std::string input_override;
    std::string outdir_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("-c,--config", config_path, "JSON config file");
    app.add_option("-i,--input", input_override, "daily input file (overrides config)");
    app.add_option("-o,--out", outdir_override, "output directory (overrides config)");
    app.add_option("--seed", seed_override, "RNG seed for synth (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });

    for (const char* name : {"ingest-check", "design", "match", "balance", "impact", "synth",
                             "all"}) {
        app.add_subcommand(name);
    }
    app.get_subcommand("ingest-check")->description("validate the input file and summarize it");
    app.get_subcommand("design")->description("fit the propensity model, write scores");
    app.get_subcommand("match")->description("nearest-neighbor match on the scores artifact");
    app.get_subcommand("balance")->description("covariate balance diagnostics");
    app.get_subcommand("impact")->description("attributable-count estimates (reads outcomes)");
    app.get_subcommand("synth")->description("generate a synthetic dataset with known truth");
    app.get_subcommand("all")->description("run the full pipeline");

    CLI11_PARSE(app, argc, argv);

    try {
        admatch::RunConfig config =
            config_path.empty() ? admatch::RunConfig{} : admatch::load_config(config_path);
        if (!input_override.empty()) config.input_path = input_override;
        if (!outdir_override.empty()) config.output_dir = outdir_override;
        if (seed_set) config.seed = seed_override;

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd != "synth" && config.input_path.empty()) {
            throw admatch::ValidationError("no input file given (use --input or config)");
        }
        if (cmd == "ingest-check") {
            admatch::cmd_ingest_check(config);
        } else if (cmd == "design") {
            admatch::cmd_design(config);
        } else if (cmd == "match") {
            admatch::cmd_match(config);
        } else if (cmd == "balance") {
            admatch::cmd_balance(config);
        } else if (cmd == "impact") {
            admatch::cmd_impact(config);
        } else if (cmd == "synth") {
            admatch::cmd_synth(config);
        } else {
            admatch::cmd_all(config);
        }
    } catch (const admatch::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const admatch::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
