#include "cfdual/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"cfdual: conformally flat metrics, their duals and frontal pairs in the lightcone"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run an experiment config and write its JSON report");
    run->add_option("config", config, "Experiment config (YAML)")->required();

    bool as_json = false;
    auto* gallery = app.add_subcommand("gallery", "Built-in example frontal pairs");
    gallery->require_subcommand(1);
    auto* list = gallery->add_subcommand("list", "List gallery entries and their parameters");
    list->add_flag("--json", as_json, "Print the list as JSON");

    app.add_subcommand("version", "Print the tool version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cfdual::cli::kExitConfig;
    }

    if (*run) {
        try {
            return cfdual::cli::run(config, std::cout).exit_code;
        } catch (const std::exception& e) {
            // Anything the runner did not classify is treated like a bad config.
            std::cout << "error: " << e.what() << '\n';
            return cfdual::cli::kExitConfig;
        }
    }
    if (*list) {
        if (as_json)
            std::cout << cfdual::cli::gallery_json().dump(2) << '\n';
        else
            cfdual::cli::print_gallery(std::cout);
        return 0;
    }
    std::cout << "cfdual " << cfdual::cli::version() << '\n';
    return 0;
}
