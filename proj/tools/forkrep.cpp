#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace forkrep::cli;

    CLI::App app{"Conjunctive-fork patterns: check, represent, extract and verify ternary relations"};
    app.require_subcommand(1);

    std::string out_path;

    std::string relation_path, distribution_path, mode = "fork", dot_path;
    std::size_t max_n = forkrep::RepresentOptions{}.max_n;

    auto* check = app.add_subcommand("check", "Check the forkness axioms and build the quotient");
    check->add_option("relation", relation_path, "Relation JSON file")->required();
    check->add_option("--dot", dot_path, "Write the pair digraph of the distinct-triple part as DOT");
    check->add_option("--out", out_path, "Write the JSON result to FILE");

    auto* represent = app.add_subcommand("represent", "Decide representability and build a witness");
    represent->add_option("relation", relation_path, "Relation JSON file")->required();
    represent->add_option("--max-n", max_n, "Largest ground set accepted (power-set witness)");
    represent->add_option("--out", out_path, "Write the JSON result to FILE");

    auto* extract = app.add_subcommand("extract", "Extract the fork or betweenness relation of a distribution");
    extract->add_option("distribution", distribution_path, "Distribution JSON file")->required();
    extract->add_option("--mode", mode, "fork or betweenness");
    extract->add_option("--out", out_path, "Write the JSON result to FILE");

    auto* verify = app.add_subcommand("verify", "Compare an extracted relation with a given one");
    verify->add_option("distribution", distribution_path, "Distribution or represent output JSON")->required();
    verify->add_option("relation", relation_path, "Relation JSON file")->required();
    verify->add_option("--mode", mode, "fork or betweenness");
    verify->add_option("--out", out_path, "Write the JSON result to FILE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(Status::invalid_input);
    }

    CommandOutcome outcome;
    if (*check)
        outcome = cmd_check(relation_path, dot_path.empty() ? std::nullopt : std::optional<std::string>(dot_path));
    else if (*represent)
        outcome = cmd_represent(relation_path, max_n);
    else if (*extract)
        outcome = cmd_extract(distribution_path, mode);
    else
        outcome = cmd_verify(distribution_path, relation_path, mode);

    const std::string text = outcome.payload.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "invalid-input: cannot write '" << out_path << "'\n";
            return static_cast<int>(Status::invalid_input);
        }
        out << text;
    }
    std::cerr << status_name(outcome.status) << "\n";
    for (const auto& line : outcome.diagnostics)
        std::cerr << "  " << line << "\n";
    return outcome.exit_code();
}
