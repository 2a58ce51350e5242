#pragma once

#include "teach/protocol.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace teach {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int invalid_input = 2;  // unreadable or invalid instance/script, failed construction
inline constexpr int property_failed = 3;
inline constexpr int budget = 4;
inline constexpr int illegal_script = 5;
}  // namespace exit_code

struct ScriptDocument {
    std::vector<TeacherAction> actions;
    std::optional<LearnerKind> learner;
    std::optional<Protocol> protocol;
};

// {"script": [{"add_feature": "f1"}, {"add_example": "x2"}, ...]} with
// optional "learner" and "protocol" keys. A bare array is accepted too.
ScriptDocument parse_script(const nlohmann::json& doc);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teach
