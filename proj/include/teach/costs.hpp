#pragma once

#include "teach/instance.hpp"
#include "teach/learners.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace teach {

// A non-negative count or Infinite. Infinite compares greater than every count.
class CostValue {
public:
    CostValue(std::size_t count) : count_(count) {}  // NOLINT(google-explicit-constructor)
    static CostValue infinite() { return CostValue(); }

    bool is_infinite() const { return !count_.has_value(); }
    bool is_finite() const { return count_.has_value(); }
    std::size_t value() const;
    std::string str() const { return count_ ? std::to_string(*count_) : "inf"; }

    friend bool operator==(const CostValue&, const CostValue&) = default;
    friend std::strong_ordering operator<=>(const CostValue& a, const CostValue& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
        return *a.count_ <=> *b.count_;
    }

private:
    CostValue() = default;
    std::optional<std::size_t> count_;
};

struct CostVector {
    std::size_t representation_cost;
    CostValue concept_spec_cost;
    CostValue invalidation_cost;

    friend bool operator==(const CostVector&, const CostVector&) = default;
    std::string str() const;
};

struct SearchBudget {
    std::size_t max_subset_size = std::numeric_limits<std::size_t>::max();  // clamped to the pool size
    std::size_t max_states = 10'000'000;
};

// The pool under one feature set.
struct FeaturizedPool {
    std::size_t dimension = 0;
    std::vector<Point> points;
    std::vector<Label> labels;

    std::size_t size() const { return points.size(); }
};

FeaturizedPool featurize_pool(const Instance& inst, const FeatureSet& features);

// Trains on the honest examples for the given object indices.
Classifier train_on(const FeaturizedPool& pool, LearnerKind learner, std::span<const std::size_t> objects);

bool classifies_pool(const FeaturizedPool& pool, const Classifier& c);
bool has_training_error(const FeaturizedPool& pool, const Classifier& c, std::span<const std::size_t> objects);

// Fast criteria: collision test (1NN), strict separability (linear).
bool is_sufficient(const FeaturizedPool& pool, LearnerKind learner);
bool is_sufficient(const Instance& inst, const FeatureSet& features, LearnerKind learner);

// Smallest honest T with L(F, T) = c* on the pool. nullopt is Infinite.
// Sets are enumerated by size, then lexicographically on pool order.
std::optional<TrainingSet> min_concept_teaching_set(const Instance& inst, const FeatureSet& features,
                                                    LearnerKind learner, const SearchBudget& budget = {});

// Smallest honest T whose trained classifier errs on a member of T.
std::optional<TrainingSet> min_invalidation_set(const Instance& inst, const FeatureSet& features,
                                                LearnerKind learner, const SearchBudget& budget = {});

CostVector fs_cost(const Instance& inst, const FeatureSet& features, LearnerKind learner,
                   const SearchBudget& budget = {});

}  // namespace teach
