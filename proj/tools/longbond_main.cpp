#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "longbond/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Vasicek and Levy-Vasicek pricing-kernel workbench"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to the JSON run configuration")
            ->required();
        sub->add_option("--format", format, "output format: csv or json");
        sub->add_option("--out", out_path, "write the report to this file");
        sub->add_option("--seed", seed, "override the simulation seed")
            ->each([&](const std::string&) { seed_given = true; });
    };

    add_common(app.add_subcommand("curve", "discount-bond term structure plus the long rate"));
    add_common(app.add_subcommand("regime", "long-rate sign, UI classification, Ross recovery"));
    add_common(app.add_subcommand("longbond", "long-bond return along a (t, r) scenario file"));
    add_common(app.add_subcommand("simulate", "Monte Carlo estimates next to analytic values"));
    add_common(app.add_subcommand("validate", "oracle pairings; exit 0 only if all checks pass"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return longbond::cli::kExitConfigError;
    }

    longbond::cli::Overrides overrides;
    if (!format.empty()) {
        if (format == "csv")
            overrides.format = longbond::cli::OutputFormat::Csv;
        else if (format == "json")
            overrides.format = longbond::cli::OutputFormat::Json;
        else {
            std::cerr << "config error: --format must be 'csv' or 'json'\n";
            return longbond::cli::kExitConfigError;
        }
    }
    if (!out_path.empty()) overrides.output_path = out_path;
    if (seed_given) overrides.seed = seed;

    const std::string command = app.get_subcommands().front()->get_name();
    return longbond::cli::run_command(command, config_path, overrides, std::cout, std::cerr);
}
