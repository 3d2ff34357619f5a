// Command-line front end: parse a scenario file, run the selected suites,
// emit the report.
//
// Exit status: 0 when no check FAILed or ERRORed, 1 otherwise, 2 on usage
// or scenario errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skewlab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"skewlab: exact verification of skew polynomial rings, divisor groups and graded SK1"};
    std::string scenario_path;
    std::string format = "human";
    std::string suite_filter;
    uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--scenario", scenario_path, "scenario file to run")->required();
    app.add_option("--format", format, "output format: human|records")->check(CLI::IsMember({"human", "records"}));
    app.add_option("--suite", suite_filter, "run only suites of this kind (or exact label)");
    auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    std::ifstream in(scenario_path);
    if (!in) {
        std::cerr << "cannot open scenario file: " << scenario_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        skewlab::Scenario sc = skewlab::parse_scenario(buf.str());
        skewlab::Report rep = skewlab::run_scenario(
            sc, seed_set ? std::optional<uint64_t>(seed) : std::nullopt, suite_filter);
        std::cout << skewlab::emit(rep, format);
        return rep.ok() ? 0 : 1;
    } catch (const skewlab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const skewlab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const skewlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
