#ifndef CHARCALC_SCENARIO_HPP
#define CHARCALC_SCENARIO_HPP

#include "charcalc/json_io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace charcalc {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultTolerance = 1e-9;

using Object = std::variant<TrigForm, TrigField, std::vector<TrigField>, AffineMap, AffineDiffeo, DifferentialCharacter,
                            Chain, PLLoop, MapLoop, Functional, CircleMap, RealVec, QTwoPi, std::int64_t,
                            DiamondConfig, TransportState>;

/// Type tag used in scenario files, e.g. "form" or "map_loop".
std::string object_type(const Object& o);

struct Check {
    std::string name;
    std::string op;
    std::map<std::string, std::string> args;  // parameter -> object name
    std::optional<Json> expected;
    double tolerance = kDefaultTolerance;
};

struct Scenario {
    std::string name;
    std::map<std::string, int> geometry;  // "M", "S", "N" -> torus dimension
    std::map<std::string, Object> objects;
    std::vector<Check> checks;
};

/// Throws ParseError or ValidationError; messages carry a JSON path.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

enum class CheckStatus { Pass, Fail, Error };

struct CheckResult {
    std::string name;
    std::string op;
    CheckStatus status = CheckStatus::Error;
    std::optional<Json> value;
    std::optional<Json> expected;
    double tolerance = kDefaultTolerance;
    double wall_time_ms = 0;
    std::string message;
    bool internal = false;  // an unexpected exception or a failed self-check
};

struct Report {
    std::string name;
    std::optional<std::uint64_t> seed;
    std::vector<CheckResult> checks;  // declaration order

    bool all_pass() const;
    /// 0 all pass, 1 a check failed or errored, 3 an internal error occurred.
    int exit_code() const;
    Json to_json(bool include_times = true) const;
};

/// Runs up to `parallelism` checks at once. Check errors never abort siblings.
Report run_scenario(const Scenario& s, int parallelism = 1);

/// Operation names known to the runner.
std::vector<std::string> known_ops();

/// Tolerance-aware comparison: numbers within tol, rational strings exactly,
/// angles mod 1, a float against an exact value numerically.
bool json_matches(const Json& computed, const Json& expected, double tol);

/// JSON schemas for scenario and report files.
Json scenario_schema();
Json report_schema();

}  // namespace charcalc

#endif
