#pragma once

#include <string>
#include <vector>

#include "mulab/report.hpp"

namespace mulab::recipes {

inline constexpr const char* kVersion = "0.1.0";

// registered experiment names, in registry order
std::vector<std::string> names();

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 2 usage, 3 embedded check failed
    std::string message;
    std::vector<report::TableInfo> tables;
};

// Executes one named recipe: resolves parameters from `cfg` (writing the
// effective values back so the manifest is self-describing), emits the
// schema-checked tables plus a JSON manifest under the `out` directory.
RunOutcome run(const std::string& recipe, report::Config cfg);

}  // namespace mulab::recipes
