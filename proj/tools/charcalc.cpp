#include "charcalc/errors.hpp"
#include "charcalc/scenario.hpp"
#include "charcalc/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitLoad = 2;
constexpr int kExitInternal = 3;

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* s = std::getenv("CHARCALC_SEED");
    if (s == nullptr || *s == '\0') return fallback;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw charcalc::ValidationError(std::string("CHARCALC_SEED is not an unsigned integer: ") + s);
    }
}

int emit(const charcalc::Report& report, const std::string& out, bool times) {
    const std::string text = report.to_json(times).dump(2);
    if (out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return kExitLoad;
        }
        f << text << "\n";
        const auto& c = report.checks;
        const auto passed = std::count_if(c.begin(), c.end(), [](const auto& r) { return r.status == charcalc::CheckStatus::Pass; });
        std::cerr << report.name << ": " << passed << "/" << c.size() << " checks passed\n";
    }
    for (const auto& r : report.checks)
        if (r.status != charcalc::CheckStatus::Pass)
            std::cerr << (r.status == charcalc::CheckStatus::Fail ? "FAIL " : "ERROR ") << r.name << ": " << r.message
                      << "\n";
    return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential character calculus on flat tori"};
    app.require_subcommand(1);

    std::string scenario_path, out;
    int parallel = 1;
    bool no_times = false;
    auto* run = app.add_subcommand("run", "Run the checks of a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--parallel", parallel, "Maximum number of concurrent checks")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "Write the report here instead of stdout");
    run->add_flag("--no-times", no_times, "Omit wall times from the report");

    std::string suite_name;
    std::optional<std::uint64_t> seed;
    auto* suite = app.add_subcommand("suite", "Run a builtin property suite");
    suite->add_option("name", suite_name, "calculus, characters, flux, transgression, extensions or holonomy")->required();
    suite->add_option("--seed", seed, "Seed; falls back to CHARCALC_SEED, then a fixed default");
    suite->add_option("--out", out, "Write the report here instead of stdout");
    suite->add_flag("--no-times", no_times, "Omit wall times from the report");

    auto* schema = app.add_subcommand("schema", "Print the scenario and report JSON schemas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitLoad;
    }

    try {
        if (*run) {
            const charcalc::Scenario s = charcalc::load_scenario(scenario_path);
            return emit(charcalc::run_scenario(s, parallel), out, !no_times);
        }
        if (*suite) {
            const std::uint64_t s = seed ? *seed : seed_from_env(charcalc::kDefaultSuiteSeed);
            return emit(charcalc::run_suite(suite_name, s), out, !no_times);
        }
        if (*schema) {
            std::cout << charcalc::Json{{"scenario", charcalc::scenario_schema()}, {"report", charcalc::report_schema()}}.dump(2)
                      << "\n";
            return 0;
        }
    } catch (const charcalc::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitLoad;
    } catch (const charcalc::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitLoad;
    } catch (const charcalc::UnknownSuite& e) {
        std::cerr << e.what() << "\n";
        return kExitLoad;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
