#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace layerscope {

struct Claim {
    std::string description;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct NamedTolerance {
    std::string name;
    double value = 0.0;
};

struct ScenarioReport {
    std::string scenario_id;
    std::vector<Claim> claims;
    std::vector<NamedTolerance> tolerances;
    long long runtime_ms = 0;

    /// False for a report without claims.
    bool passed() const;
};

struct ScenarioOptions {
    std::uint64_t seed = 20240001;
    int trials = 200;
    /// When false runtime_ms is reported as 0, making reports byte-stable.
    bool include_timing = true;
};

/// transitivity, example1, nonconvexity, unsharp-equivalence, concatenation,
/// convexity, degree, oracle-crosscheck, core-invariants.
const std::vector<std::string> &scenario_names();

/// Throws Error(InvalidArgument) for an unknown name or trials < 1.
ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &opts = {});

std::string render_text(const std::vector<ScenarioReport> &reports);
std::string render_json(const std::vector<ScenarioReport> &reports);

}  // namespace layerscope
