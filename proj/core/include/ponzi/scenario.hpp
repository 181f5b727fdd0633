#pragma once

#include <filesystem>
#include <set>
#include <variant>

#include "ponzi/attacks.hpp"
#include "ponzi/schemes.hpp"

namespace ponzi::scenario {

// A simulation scenario: scheme parameters, the event script, and the set
// of recipients whose fallback throws.
struct Simulation {
    Address scheme;
    Address owner;
    sim::SchemeParams params;
    std::vector<sim::SimEvent> events;
    std::set<Address> failing_recipients;

    sim::FailureOracle oracle() const;
};

using AttackScenario = std::variant<attacks::DosScenario, attacks::ShutdownScenario>;

// Schema violations throw Error messages naming the offending JSON path,
// e.g. "scenario.json: params.multiplier: expected [num, den]".
Simulation load_simulation(const std::filesystem::path& path);
Simulation parse_simulation(const std::string& text, const std::string& source_name);

AttackScenario load_attack(const std::filesystem::path& path);
AttackScenario parse_attack(const std::string& text, const std::string& source_name);

} // namespace ponzi::scenario
