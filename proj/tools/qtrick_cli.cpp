// Command-line front end: build / verify / gen / selftest.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtrick/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"quaternion-trick construction and verification for polarized lattice models"};
    app.require_subcommand(1);

    std::string instance_path, output_path;

    auto* build = app.add_subcommand("build", "run the construction and write a full report");
    build->add_option("instance", instance_path, "instance JSON file")->required();
    build->add_option("-o,--output", output_path, "report output path")->required();

    auto* verify = app.add_subcommand("verify", "run the construction, report to stdout");
    verify->add_option("instance", instance_path, "instance JSON file")->required();

    std::size_t g = 1;
    std::string type_csv = "1";
    std::string ring = "integers";
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a deterministic random instance");
    gen->add_option("--g", g, "dimension g")->required();
    gen->add_option("--type", type_csv, "polarization type d1,...,dg")->required();
    gen->add_option("--ring", ring, "integers | gauss | sqrt_minus2 | zeta3");
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("-o,--output", output_path, "instance output path")->required();

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : qtrick::kExitInputError;
    }

    if (build->parsed()) return qtrick::cmd_build(instance_path, output_path, std::cerr);
    if (verify->parsed()) return qtrick::cmd_verify(instance_path, std::cout, std::cerr);
    if (gen->parsed()) {
        std::vector<qtrick::Int> type;
        std::string item;
        std::istringstream ss(type_csv);
        try {
            while (std::getline(ss, item, ',')) type.push_back(qtrick::int_from_string(item));
        } catch (const qtrick::Error& e) {
            std::cerr << "qtrick: " << e.what() << "\n";
            return qtrick::kExitInputError;
        }
        return qtrick::cmd_gen(g, type, ring, seed, output_path, std::cerr);
    }
    if (selftest->parsed()) return qtrick::cmd_selftest(std::cout, std::cerr);
    return qtrick::kExitInputError;
}
