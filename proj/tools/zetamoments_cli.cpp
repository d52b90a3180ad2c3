#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zetamoments/errors.hpp"
#include "zetamoments/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for shifted moments of the Riemann zeta function"};
    app.require_subcommand(1);

    std::string config_path, output;
    std::vector<std::string> overrides;
    for (const auto& name : zm::command_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " suite");
        sub->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "override a parameter (key=value); repeatable");
        sub->add_option("--output", output, "output path prefix (same as --set output=...)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(zm::ExitCode::config_error);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        zm::Config cfg = config_path.empty() ? zm::Config{} : zm::Config::from_file(config_path);
        for (const auto& kv : overrides) cfg.set(kv);
        if (!output.empty()) cfg.set("output", output);
        return zm::run_command(command, cfg, std::cout, std::cerr);
    } catch (const zm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    }
}
