#include "teach/protocol.hpp"

#include "teach/error.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <unordered_set>

namespace teach {

std::string_view to_string(Protocol protocol) {
    return protocol == Protocol::open ? "open" : "edf";
}

Protocol parse_protocol(std::string_view text) {
    if (text == "open") return Protocol::open;
    if (text == "edf") return Protocol::error_driven;
    throw TeachError(ErrorCode::InvalidParams, "unknown protocol '" + std::string(text) + "' (expected open or edf)");
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::await_action: return "await_action";
        case Phase::inner_featuring: return "inner_featuring";
        case Phase::terminated: return "terminated";
        case Phase::stuck: return "stuck";
    }
    return "?";
}

std::string_view to_string(RunOutcome outcome) {
    switch (outcome) {
        case RunOutcome::terminated: return "terminated";
        case RunOutcome::stuck: return "stuck";
        case RunOutcome::script_exhausted: return "script_exhausted";
        case RunOutcome::illegal_action: return "illegal_action";
        case RunOutcome::step_limit: return "step_limit";
    }
    return "?";
}

std::string ProtocolState::digest(const Instance& inst) const {
    std::string t = "{";
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (i) t += ',';
        t += inst.object_id(examples[i].object);
    }
    return "F=" + inst.describe(features) + ";T=" + t + "};phase=" + std::string(to_string(phase));
}

std::string describe(const TeacherAction& action) {
    if (const auto* f = std::get_if<AddFeature>(&action)) return "add_feature " + f->feature;
    return "add_example " + std::get<AddExample>(action).object;
}

namespace {

std::vector<std::size_t> objects_of(const TrainingSet& t) {
    std::vector<std::size_t> out;
    out.reserve(t.size());
    for (const auto& e : t) out.push_back(e.object);
    return out;
}

// Phase after retraining; the outer guard is re-evaluated immediately, so
// an observable state is never between loop checks.
Phase resolve_phase(const FeaturizedPool& pool, const Classifier& c, std::span<const std::size_t> objects,
                    Protocol protocol, bool has_successor) {
    if (protocol == Protocol::error_driven && has_training_error(pool, c, objects)) {
        return has_successor ? Phase::inner_featuring : Phase::stuck;
    }
    return classifies_pool(pool, c) ? Phase::terminated : Phase::await_action;
}

ProtocolState make_state(const Instance& inst, LearnerKind learner, Protocol protocol, FeatureSet features,
                         TrainingSet examples) {
    const FeaturizedPool pool = featurize_pool(inst, features);
    const auto objects = objects_of(examples);
    Classifier c = train_on(pool, learner, objects);
    const bool has_successor = !lattice_successor_features(inst, features).empty();
    Phase phase = resolve_phase(pool, c, objects, protocol, has_successor);
    return {std::move(features), std::move(examples), std::move(c), phase};
}

[[noreturn]] void illegal(const std::string& why) {
    throw TeachError(ErrorCode::IllegalAction, why);
}

FeatureSet apply_feature(const Instance& inst, const ProtocolState& state, const AddFeature& action) {
    const auto successors = lattice_successor_features(inst, state.features);
    for (auto f : successors) {
        if (inst.feature_id(f) == action.feature) return state.features.with(f);
    }
    illegal("feature '" + action.feature + "' is not a lattice successor of " + inst.describe(state.features));
}

TrainingSet apply_example(const Instance& inst, const ProtocolState& state, const AddExample& action) {
    std::size_t object;
    try {
        object = inst.object_index(action.object);
    } catch (const TeachError&) {
        illegal("unknown object '" + action.object + "'");
    }
    for (const auto& e : state.examples) {
        if (e.object == object) illegal("object '" + action.object + "' is already in the training set");
    }
    TrainingSet next = state.examples;
    next.push_back({object, inst.target(object)});
    std::sort(next.begin(), next.end(), [](const Example& a, const Example& b) { return a.object < b.object; });
    return next;
}

}  // namespace

ProtocolState protocol_start(const Instance& inst, LearnerKind learner) {
    // With T empty there is no training error, so both protocols agree here.
    return make_state(inst, learner, Protocol::open, FeatureSet{}, TrainingSet{});
}

ProtocolState step_open(const Instance& inst, LearnerKind learner, const ProtocolState& state,
                        const TeacherAction& action) {
    if (state.phase != Phase::await_action) {
        illegal("no action is accepted in phase " + std::string(to_string(state.phase)));
    }
    if (const auto* f = std::get_if<AddFeature>(&action)) {
        return make_state(inst, learner, Protocol::open, apply_feature(inst, state, *f), state.examples);
    }
    return make_state(inst, learner, Protocol::open, state.features,
                      apply_example(inst, state, std::get<AddExample>(action)));
}

ProtocolState step_edf(const Instance& inst, LearnerKind learner, const ProtocolState& state,
                       const TeacherAction& action) {
    const auto* feature = std::get_if<AddFeature>(&action);
    switch (state.phase) {
        case Phase::await_action:
            if (feature) illegal("features may only be added while a training example is misclassified");
            return make_state(inst, learner, Protocol::error_driven, state.features,
                              apply_example(inst, state, std::get<AddExample>(action)));
        case Phase::inner_featuring:
            if (!feature) illegal("a training example is misclassified; a feature must be added");
            return make_state(inst, learner, Protocol::error_driven, apply_feature(inst, state, *feature),
                              state.examples);
        case Phase::stuck:
            throw TeachError(ErrorCode::IllegalAction,
                             "Stuck: training error persists and " + inst.describe(state.features) +
                                 " has no lattice successor");
        case Phase::terminated:
            break;
    }
    illegal("no action is accepted in phase terminated");
}

ProtocolState step(const Instance& inst, LearnerKind learner, Protocol protocol, const ProtocolState& state,
                   const TeacherAction& action) {
    return protocol == Protocol::open ? step_open(inst, learner, state, action)
                                      : step_edf(inst, learner, state, action);
}

Teacher scripted_teacher(std::vector<TeacherAction> script) {
    auto position = std::make_shared<std::size_t>(0);
    auto actions = std::make_shared<const std::vector<TeacherAction>>(std::move(script));
    return [position, actions](const ProtocolState&) -> std::optional<TeacherAction> {
        if (*position >= actions->size()) return std::nullopt;
        return (*actions)[(*position)++];
    };
}

nlohmann::json Transcript::to_json(const Instance& inst) const {
    nlohmann::json doc;
    doc["steps"] = nlohmann::json::array();
    for (const auto& s : steps) {
        nlohmann::json action;
        if (const auto* f = std::get_if<AddFeature>(&s.action)) {
            action["add_feature"] = f->feature;
        } else {
            action["add_example"] = std::get<AddExample>(s.action).object;
        }
        doc["steps"].push_back({{"state", s.state_digest}, {"action", action}});
    }
    nlohmann::json features = nlohmann::json::array();
    for (auto f : final_features.indices()) features.push_back(inst.feature_id(f));
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& e : final_examples) examples.push_back(inst.object_id(e.object));
    doc["final_features"] = features;
    doc["final_examples"] = examples;
    doc["feature_count"] = feature_count;
    doc["label_count"] = label_count;
    doc["terminated"] = terminated;
    doc["outcome"] = std::string(to_string(outcome));
    if (failed_step) doc["failed_step"] = *failed_step;
    if (!message.empty()) doc["message"] = message;
    return doc;
}

Transcript run_protocol(const Instance& inst, LearnerKind learner, Protocol protocol, const Teacher& teacher,
                        std::size_t step_limit) {
    Transcript out;
    ProtocolState state = protocol_start(inst, learner);
    for (;;) {
        if (state.phase == Phase::terminated) {
            out.outcome = RunOutcome::terminated;
            break;
        }
        if (state.phase == Phase::stuck) {
            out.outcome = RunOutcome::stuck;
            out.message = "training error persists and " + inst.describe(state.features) +
                          " has no lattice successor";
            break;
        }
        if (out.steps.size() >= step_limit) {
            out.outcome = RunOutcome::step_limit;
            out.message = "StepLimitExceeded after " + std::to_string(step_limit) + " steps";
            break;
        }
        auto action = teacher(state);
        if (!action) {
            out.outcome = RunOutcome::script_exhausted;
            break;
        }
        try {
            ProtocolState next = step(inst, learner, protocol, state, *action);
            out.steps.push_back({state.digest(inst), *action});
            state = std::move(next);
        } catch (const TeachError& e) {
            if (e.code() != ErrorCode::IllegalAction) throw;
            out.outcome = RunOutcome::illegal_action;
            out.failed_step = out.steps.size();
            out.message = e.what();
            break;
        }
    }
    out.final_features = state.features;
    out.final_examples = state.examples;
    out.label_count = state.examples.size();
    out.feature_count = state.features.size();
    out.terminated = out.outcome == RunOutcome::terminated;
    return out;
}

namespace {

struct StateKey {
    std::size_t lattice_index;
    std::uint64_t mask;

    friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const noexcept {
        return std::hash<std::uint64_t>{}(k.mask * 0x9E3779B97F4A7C15ULL ^ k.lattice_index);
    }
};

// Layered exhaustive search: layer k holds the reachable states with |T| = k.
// Feature additions stay inside a layer, example additions move to k + 1.
std::vector<CostValue> search_labels(const Instance& inst, LearnerKind learner, Protocol protocol,
                                     std::optional<std::size_t> target, const SearchBudget& budget) {
    const std::size_t n = inst.object_count();
    if (n > 63) throw TeachError(ErrorCode::BudgetExceeded, "state search supports at most 63 objects");
    const auto& lattice = inst.lattice();

    std::vector<FeaturizedPool> pools;
    std::vector<std::vector<std::size_t>> successors(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        pools.push_back(featurize_pool(inst, lattice[i]));
        for (auto f : lattice_successor_features(inst, lattice[i])) {
            successors[i].push_back(*inst.lattice_index(lattice[i].with(f)));
        }
    }

    std::vector<CostValue> best(lattice.size(), CostValue::infinite());
    std::unordered_set<StateKey, StateKeyHash> seen;
    std::vector<StateKey> frontier{{*inst.lattice_index(FeatureSet{}), 0}};
    seen.insert(frontier.front());

    for (std::size_t layer = 0; !frontier.empty(); ++layer) {
        std::vector<StateKey> next;
        for (std::size_t q = 0; q < frontier.size(); ++q) {
            const StateKey key = frontier[q];
            if (seen.size() > budget.max_states) {
                throw TeachError(ErrorCode::BudgetExceeded,
                                 "protocol search exceeded " + std::to_string(budget.max_states) + " states");
            }
            std::vector<std::size_t> objects;
            for (std::size_t x = 0; x < n; ++x)
                if (key.mask >> x & 1U) objects.push_back(x);
            const FeaturizedPool& pool = pools[key.lattice_index];
            const Classifier c = train_on(pool, learner, objects);
            const Phase phase =
                resolve_phase(pool, c, objects, protocol, !successors[key.lattice_index].empty());

            if (phase == Phase::terminated) {
                if (best[key.lattice_index].is_infinite()) best[key.lattice_index] = layer;
                continue;
            }
            if (phase == Phase::stuck) continue;

            const bool may_feature = protocol == Protocol::open || phase == Phase::inner_featuring;
            const bool may_label = phase == Phase::await_action;
            if (may_feature) {
                for (auto succ : successors[key.lattice_index]) {
                    StateKey s{succ, key.mask};
                    if (seen.insert(s).second) frontier.push_back(s);
                }
            }
            if (may_label) {
                for (std::size_t x = 0; x < n; ++x) {
                    if (key.mask >> x & 1U) continue;
                    StateKey s{key.lattice_index, key.mask | (std::uint64_t{1} << x)};
                    if (seen.insert(s).second) next.push_back(s);
                }
            }
        }
        if (target && best[*target].is_finite()) break;
        frontier = std::move(next);
    }
    return best;
}

}  // namespace

TeachingCost optimal_teaching_cost(const Instance& inst, LearnerKind learner, Protocol protocol,
                                   const FeatureSet& target, const SearchBudget& budget) {
    const std::size_t idx = inst.require_lattice_index(target);
    auto best = search_labels(inst, learner, protocol, idx, budget);
    return {target.size(), best[idx]};
}

std::vector<TeachingCost> optimal_teaching_costs(const Instance& inst, LearnerKind learner, Protocol protocol,
                                                 const SearchBudget& budget) {
    auto best = search_labels(inst, learner, protocol, std::nullopt, budget);
    std::vector<TeachingCost> out;
    for (std::size_t i = 0; i < best.size(); ++i) out.push_back({inst.lattice()[i].size(), best[i]});
    return out;
}

}  // namespace teach
