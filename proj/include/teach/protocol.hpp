#pragma once

#include "teach/costs.hpp"
#include "teach/instance.hpp"
#include "teach/learners.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace teach {

enum class Protocol { open, error_driven };

std::string_view to_string(Protocol protocol);
Protocol parse_protocol(std::string_view text);  // "open" | "edf"

enum class Phase {
    await_action,     // outer loop: teacher chooses (Open) or must add an example (EDF)
    inner_featuring,  // EDF only: a training example is misclassified, a feature must be added
    terminated,       // c = c* on the whole pool
    stuck,            // EDF only: training error but no lattice successor
};

std::string_view to_string(Phase phase);

struct ProtocolState {
    FeatureSet features;
    TrainingSet examples;
    Classifier classifier;
    Phase phase;

    std::string digest(const Instance& inst) const;
};

struct AddFeature {
    std::string feature;
    friend bool operator==(const AddFeature&, const AddFeature&) = default;
};

struct AddExample {
    std::string object;
    friend bool operator==(const AddExample&, const AddExample&) = default;
};

using TeacherAction = std::variant<AddFeature, AddExample>;

std::string describe(const TeacherAction& action);

ProtocolState protocol_start(const Instance& inst, LearnerKind learner);

// Open-Featuring. Throws IllegalAction.
ProtocolState step_open(const Instance& inst, LearnerKind learner, const ProtocolState& state,
                        const TeacherAction& action);

// Error-Driven-Featuring. Throws IllegalAction (including any action on a
// stuck state).
ProtocolState step_edf(const Instance& inst, LearnerKind learner, const ProtocolState& state,
                       const TeacherAction& action);

ProtocolState step(const Instance& inst, LearnerKind learner, Protocol protocol, const ProtocolState& state,
                   const TeacherAction& action);

// Returns the next action, or nullopt when the teacher has nothing more to say.
using Teacher = std::function<std::optional<TeacherAction>(const ProtocolState&)>;

Teacher scripted_teacher(std::vector<TeacherAction> script);

enum class RunOutcome { terminated, stuck, script_exhausted, illegal_action, step_limit };

std::string_view to_string(RunOutcome outcome);

struct TranscriptEntry {
    std::string state_digest;  // state before the action
    TeacherAction action;
};

struct Transcript {
    std::vector<TranscriptEntry> steps;
    FeatureSet final_features;
    TrainingSet final_examples;
    std::size_t label_count = 0;
    std::size_t feature_count = 0;
    bool terminated = false;
    RunOutcome outcome = RunOutcome::script_exhausted;
    std::optional<std::size_t> failed_step;  // index of the rejected action
    std::string message;

    nlohmann::json to_json(const Instance& inst) const;
};

// Runs the teacher to termination, stuck, teacher exhaustion, an illegal
// action or the step limit. Failures are recorded in the transcript.
Transcript run_protocol(const Instance& inst, LearnerKind learner, Protocol protocol, const Teacher& teacher,
                        std::size_t step_limit = 100'000);

struct TeachingCost {
    std::size_t features;
    CostValue labels;

    friend bool operator==(const TeachingCost&, const TeachingCost&) = default;
    std::string str() const { return "(" + std::to_string(features) + "," + labels.str() + ")"; }
};

// Minimum labels over all legal teacher behaviours that terminate with
// final feature set exactly `target`. Exhaustive over (F, T) states.
TeachingCost optimal_teaching_cost(const Instance& inst, LearnerKind learner, Protocol protocol,
                                   const FeatureSet& target, const SearchBudget& budget = {});

// The same, for every lattice member at once (aligned with inst.lattice()).
std::vector<TeachingCost> optimal_teaching_costs(const Instance& inst, LearnerKind learner, Protocol protocol,
                                                 const SearchBudget& budget = {});

}  // namespace teach
