#include "oracles.hpp"
#include "support.hpp"

#include "teach/costs.hpp"
#include "teach/error.hpp"
#include "teach/protocol.hpp"
#include "teach/verifier.hpp"

#include <doctest.h>

using namespace teach;
using namespace testing_support;

namespace {

const char* kAllNegative = R"({
  "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 0}],
  "features": [{"id": "f1", "values": {"x1": "1", "x2": "2"}}],
  "lattice": [[], ["f1"]]
})";

ProtocolState apply(const Instance& inst, LearnerKind l, Protocol p, std::vector<TeacherAction> actions) {
    ProtocolState s = protocol_start(inst, l);
    for (const auto& a : actions) s = step(inst, l, p, s, a);
    return s;
}

bool training_error(const Instance& inst, const ProtocolState& s) {
    for (const auto& e : s.examples)
        if (s.classifier.predict(featurize(inst, s.features, e.object)) != e.label) return true;
    return false;
}

bool pool_correct(const Instance& inst, const ProtocolState& s) {
    for (std::size_t x = 0; x < inst.object_count(); ++x)
        if (s.classifier.predict(featurize(inst, s.features, x)) != inst.target(x)) return false;
    return true;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const TeachError& e) {
        return e.code();
    }
    return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("protocol start") {
    CHECK(protocol_start(from_text(kThresh4), LearnerKind::linear).phase == Phase::await_action);
    CHECK(protocol_start(from_text(kXor4), LearnerKind::one_nn).phase == Phase::await_action);
    const ProtocolState s = protocol_start(from_text(kAllNegative), LearnerKind::linear);
    CHECK(s.phase == Phase::terminated);
    CHECK(s.classifier.is_constant());
}

TEST_CASE("Open-Featuring steps") {
    const Instance inst = from_text(kThresh4);
    const auto l = LearnerKind::linear;
    ProtocolState s = step_open(inst, l, protocol_start(inst, l), AddFeature{"f1"});
    CHECK(s.features.size() == 1);
    CHECK(s.examples.empty());
    CHECK(s.classifier.is_constant());
    CHECK(s.phase == Phase::await_action);
    s = step_open(inst, l, s, AddExample{"x2"});
    CHECK(s.phase == Phase::await_action);
    s = step_open(inst, l, s, AddExample{"x3"});
    CHECK(s.phase == Phase::terminated);
    CHECK(s.digest(inst) == "F={f1};T={x2,x3};phase=terminated");

    CHECK(code_of([&] { step_open(inst, l, protocol_start(inst, l), AddFeature{"f9"}); }) == ErrorCode::IllegalAction);
    CHECK(code_of([&] { step_open(inst, l, s, AddExample{"x1"}); }) == ErrorCode::IllegalAction);
    const ProtocolState one = step_open(inst, l, protocol_start(inst, l), AddExample{"x1"});
    CHECK(code_of([&] { step_open(inst, l, one, AddExample{"x1"}); }) == ErrorCode::IllegalAction);
    CHECK(code_of([&] { step_open(inst, l, one, AddExample{"nope"}); }) == ErrorCode::IllegalAction);
}

TEST_CASE("Error-Driven-Featuring steps") {
    const Instance thresh = from_text(kThresh4);
    const auto lin = LearnerKind::linear;
    ProtocolState s = step_edf(thresh, lin, protocol_start(thresh, lin), AddExample{"x1"});
    CHECK(s.phase == Phase::await_action);
    CHECK(code_of([&] { step_edf(thresh, lin, s, AddFeature{"f1"}); }) == ErrorCode::IllegalAction);
    s = step_edf(thresh, lin, s, AddExample{"x3"});
    CHECK(s.phase == Phase::inner_featuring);
    CHECK(code_of([&] { step_edf(thresh, lin, s, AddExample{"x2"}); }) == ErrorCode::IllegalAction);
    s = step_edf(thresh, lin, s, AddFeature{"f1"});
    CHECK(s.phase == Phase::terminated);

    const Instance xor4 = from_text(kXor4);
    CHECK(code_of([&] {
              step_edf(xor4, LearnerKind::one_nn, protocol_start(xor4, LearnerKind::one_nn), AddFeature{"f1"});
          }) == ErrorCode::IllegalAction);

    const Instance coll = from_text(kColl);
    const auto nn = LearnerKind::one_nn;
    ProtocolState c = apply(coll, nn, Protocol::error_driven, {AddExample{"x1"}, AddExample{"x2"}});
    CHECK(c.phase == Phase::inner_featuring);
    c = step_edf(coll, nn, c, AddFeature{"f1"});
    CHECK(c.phase == Phase::stuck);
    try {
        step_edf(coll, nn, c, AddExample{"x1"});
        FAIL("acted on a stuck state");
    } catch (const TeachError& e) {
        CHECK(e.code() == ErrorCode::IllegalAction);
        CHECK(std::string(e.what()).find("Stuck") != std::string::npos);
    }
}

TEST_CASE("scripted runs") {
    const Instance thresh = from_text(kThresh4);
    const Transcript t = run_protocol(thresh, LearnerKind::linear, Protocol::error_driven,
                                      scripted_teacher({AddExample{"x1"}, AddExample{"x3"}, AddFeature{"f1"}}));
    CHECK(t.terminated);
    CHECK(t.outcome == RunOutcome::terminated);
    CHECK(t.feature_count == 1);
    CHECK(t.label_count == 2);
    CHECK(t.steps.size() == 3);
    CHECK(t.steps[0].state_digest == "F={};T={};phase=await_action");

    const Transcript empty = run_protocol(from_text(kAllNegative), LearnerKind::linear, Protocol::open,
                                          scripted_teacher({}));
    CHECK(empty.terminated);
    CHECK(empty.steps.empty());
    CHECK(empty.label_count == 0);
    CHECK(empty.feature_count == 0);

    const Transcript dup = run_protocol(thresh, LearnerKind::linear, Protocol::open,
                                        scripted_teacher({AddExample{"x1"}, AddExample{"x1"}}));
    CHECK(dup.outcome == RunOutcome::illegal_action);
    REQUIRE(dup.failed_step.has_value());
    CHECK(*dup.failed_step == 1);
    CHECK_FALSE(dup.terminated);

    const Transcript short_script = run_protocol(thresh, LearnerKind::linear, Protocol::open,
                                                 scripted_teacher({AddFeature{"f1"}}));
    CHECK(short_script.outcome == RunOutcome::script_exhausted);

    auto forever = [](const ProtocolState& s) -> std::optional<TeacherAction> {
        (void)s;
        return AddExample{"x1"};
    };
    const Transcript limited = run_protocol(from_text(kColl), LearnerKind::one_nn, Protocol::open, forever, 1);
    CHECK(limited.outcome == RunOutcome::step_limit);

    const Transcript stuck = run_protocol(from_text(kColl), LearnerKind::one_nn, Protocol::error_driven,
                                          scripted_teacher({AddExample{"x1"}, AddExample{"x2"}, AddFeature{"f1"}}));
    CHECK(stuck.outcome == RunOutcome::stuck);
}

TEST_CASE("transcripts replay to identical states") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = instance_from_json(random_document(rng, 2, 4));
        for (auto protocol : {Protocol::open, Protocol::error_driven}) {
            // A random legal teacher.
            std::uint64_t pick = rng.below(1000);
            auto teacher = [&](const ProtocolState& s) -> std::optional<TeacherAction> {
                std::vector<TeacherAction> legal;
                for (const auto& f : inst.feature_ids()) legal.push_back(AddFeature{f});
                for (std::size_t x = 0; x < inst.object_count(); ++x) legal.push_back(AddExample{inst.object_id(x)});
                std::vector<TeacherAction> ok;
                for (const auto& a : legal) {
                    try {
                        step(inst, LearnerKind::linear, protocol, s, a);
                        ok.push_back(a);
                    } catch (const TeachError&) {
                    }
                }
                if (ok.empty()) return std::nullopt;
                return ok[pick++ % ok.size()];
            };
            const Transcript a = run_protocol(inst, LearnerKind::linear, protocol, teacher);
            std::vector<TeacherAction> script;
            for (const auto& s : a.steps) script.push_back(s.action);
            const Transcript b = run_protocol(inst, LearnerKind::linear, protocol, scripted_teacher(script));
            CHECK(a.to_json(inst) == b.to_json(inst));
            CHECK(a.label_count == a.final_examples.size());
            CHECK(a.feature_count == a.final_features.size());

            ProtocolState s = protocol_start(inst, LearnerKind::linear);
            for (const auto& entry : a.steps) {
                CHECK(entry.state_digest == s.digest(inst));
                if (protocol == Protocol::error_driven && std::holds_alternative<AddFeature>(entry.action)) {
                    CHECK(training_error(inst, s));
                }
                s = step(inst, LearnerKind::linear, protocol, s, entry.action);
                if (protocol == Protocol::error_driven && s.phase != Phase::terminated) {
                    CHECK((s.phase == Phase::inner_featuring || s.phase == Phase::stuck) == training_error(inst, s));
                }
            }
            if (a.terminated) CHECK(pool_correct(inst, s));
        }
    }
}

TEST_CASE("optimal teaching cost examples") {
    const Instance thresh = from_text(kThresh4);
    const FeatureSet f1 = thresh.lattice().back();
    CHECK(optimal_teaching_cost(thresh, LearnerKind::linear, Protocol::open, f1) == TeachingCost{1, 2});
    CHECK(optimal_teaching_cost(thresh, LearnerKind::linear, Protocol::error_driven, f1) == TeachingCost{1, 2});

    const Instance chain = named_instance("edf-chain");
    const FeatureSet top = chain.lattice().back();
    CHECK(optimal_teaching_cost(chain, LearnerKind::one_nn, Protocol::error_driven, top) ==
          TeachingCost{2, CostValue::infinite()});
    CHECK(optimal_teaching_cost(chain, LearnerKind::one_nn, Protocol::open, top).labels.is_finite());

    SearchBudget tiny;
    tiny.max_states = 2;
    CHECK(code_of([&] { optimal_teaching_cost(thresh, LearnerKind::linear, Protocol::open, f1, tiny); }) ==
          ErrorCode::BudgetExceeded);
}

TEST_CASE("optimal costs agree with exhaustive state exploration") {
    Rng rng(808);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 1 + trial % 2;
        const Instance inst = instance_from_json(random_document(rng, d, 3 + rng.below(3)));
        for (auto learner : {LearnerKind::one_nn, LearnerKind::linear}) {
            for (auto protocol : {Protocol::open, Protocol::error_driven}) {
                const auto ref = oracle::protocol_costs(inst, learner, protocol);
                const auto costs = optimal_teaching_costs(inst, learner, protocol);
                REQUIRE(costs.size() == inst.lattice().size());
                for (std::size_t i = 0; i < costs.size(); ++i) {
                    const FeatureSet& f = inst.lattice()[i];
                    CHECK(costs[i].features == f.size());
                    auto it = ref.find(f.indices());
                    if (it == ref.end()) {
                        CHECK(costs[i].labels.is_infinite());
                    } else {
                        CHECK(costs[i].labels == CostValue(it->second));
                    }
                    CHECK(optimal_teaching_cost(inst, learner, protocol, f) == costs[i]);
                }
            }
        }
    }
}

TEST_CASE("Open label cost never beats the concept specification cost") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst = instance_from_json(random_document(rng, 1 + trial % 2, 5));
        if (!inst.has_both_labels()) continue;
        const auto costs = optimal_teaching_costs(inst, LearnerKind::linear, Protocol::open);
        for (std::size_t i = 0; i < costs.size(); ++i) {
            const auto t = min_concept_teaching_set(inst, inst.lattice()[i], LearnerKind::linear);
            if (!t) continue;
            CHECK(costs[i].labels >= CostValue(t->size()));
            CHECK(costs[i].labels <= CostValue(inst.lattice()[i].size() + 1));
        }
    }
}
