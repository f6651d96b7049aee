#include <iostream>

#include <CLI11.hpp>

#include "quantomc/config.hpp"
#include "quantomc/errors.hpp"
#include "quantomc/version.hpp"

namespace {

struct SubcommandArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::string> out_dir;
    std::optional<std::string> dump_paths;
};

void add_common_options(CLI::App* cmd, SubcommandArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "Override the configured RNG seed");
    cmd->add_option("--paths", args.paths, "Override the configured path count");
    cmd->add_option("--out", args.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo pricer for multi-asset quanto basket calls"};
    app.set_version_flag("--version", qmc::kVersion);
    app.require_subcommand(1);

    SubcommandArgs args;
    CLI::App* price = app.add_subcommand("price", "Price one model variant");
    CLI::App* sweep = app.add_subcommand("sweep", "Run the model-comparison sweep");
    CLI::App* greeks = app.add_subcommand("greeks", "Correlation sensitivities (Cora/Gora)");
    CLI::App* calibrate = app.add_subcommand("calibrate", "Derive parameters from history CSVs");
    for (CLI::App* cmd : {price, sweep, greeks, calibrate}) add_common_options(cmd, args);
    price->add_option("--dump-paths", args.dump_paths,
                      "Write per-step process values for the first 100 paths to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    qmc::CliOptions options;
    options.config_path = args.config_path;
    options.seed = args.seed;
    options.paths = args.paths;
    options.out_dir = args.out_dir;
    options.dump_paths = args.dump_paths;
    if (price->parsed()) options.command = qmc::Command::Price;
    if (sweep->parsed()) options.command = qmc::Command::Sweep;
    if (greeks->parsed()) options.command = qmc::Command::Greeks;
    if (calibrate->parsed()) options.command = qmc::Command::Calibrate;

    try {
        return qmc::run(qmc::parse_config(options));
    } catch (const qmc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qmc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const qmc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
