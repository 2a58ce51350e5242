#include "teach/costs.hpp"

#include "teach/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace teach {

std::size_t CostValue::value() const {
    if (!count_) throw std::logic_error("value() of an infinite cost");
    return *count_;
}

std::string CostVector::str() const {
    return "(" + std::to_string(representation_cost) + "," + concept_spec_cost.str() + "," +
           invalidation_cost.str() + ")";
}

FeaturizedPool featurize_pool(const Instance& inst, const FeatureSet& features) {
    FeaturizedPool pool;
    pool.dimension = features.size();
    pool.points.reserve(inst.object_count());
    for (std::size_t x = 0; x < inst.object_count(); ++x) {
        pool.points.push_back(featurize(inst, features, x));
        pool.labels.push_back(inst.target(x));
    }
    return pool;
}

Classifier train_on(const FeaturizedPool& pool, LearnerKind learner, std::span<const std::size_t> objects) {
    std::vector<LabeledPoint> data;
    data.reserve(objects.size());
    for (auto o : objects) data.push_back({pool.points[o], pool.labels[o]});
    return train(learner, pool.dimension, data);
}

bool classifies_pool(const FeaturizedPool& pool, const Classifier& c) {
    for (std::size_t x = 0; x < pool.size(); ++x) {
        if (c.predict(pool.points[x]) != pool.labels[x]) return false;
    }
    return true;
}

bool has_training_error(const FeaturizedPool& pool, const Classifier& c, std::span<const std::size_t> objects) {
    return std::any_of(objects.begin(), objects.end(),
                       [&](std::size_t o) { return c.predict(pool.points[o]) != pool.labels[o]; });
}

bool is_sufficient(const FeaturizedPool& pool, LearnerKind learner) {
    if (learner == LearnerKind::one_nn) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                if (pool.labels[i] != pool.labels[j] && pool.points[i] == pool.points[j]) return false;
            }
        }
        return true;
    }
    std::vector<Point> positive, negative;
    for (std::size_t x = 0; x < pool.size(); ++x) {
        (pool.labels[x] == Label::one ? positive : negative).push_back(pool.points[x]);
    }
    return strict_separability(positive, negative, pool.dimension).has_value();
}

bool is_sufficient(const Instance& inst, const FeatureSet& features, LearnerKind learner) {
    inst.require_lattice_index(features);
    return is_sufficient(featurize_pool(inst, features), learner);
}

namespace {

// Advances `combo` (sorted indices in [0, n)) to the next k-subset in
// lexicographic order; false when exhausted.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
    const std::size_t k = combo.size();
    for (std::size_t i = k; i-- > 0;) {
        if (combo[i] < n - k + i) {
            ++combo[i];
            for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
            return true;
        }
    }
    return false;
}

template <class Predicate>
std::optional<std::vector<std::size_t>> smallest_subset(std::size_t n, const SearchBudget& budget,
                                                        Predicate&& accept) {
    const std::size_t max_size = std::min(budget.max_subset_size, n);
    std::size_t states = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > max_size) {
            throw TeachError(ErrorCode::BudgetExceeded,
                             "subset size bound " + std::to_string(max_size) + " reached without a witness");
        }
        std::vector<std::size_t> combo(k);
        for (std::size_t i = 0; i < k; ++i) combo[i] = i;
        do {
            if (++states > budget.max_states) {
                throw TeachError(ErrorCode::BudgetExceeded, "state budget " + std::to_string(budget.max_states) +
                                                                " exhausted at subset size " + std::to_string(k));
            }
            if (accept(combo)) return combo;
        } while (next_combination(combo, n));
    }
    return std::nullopt;
}

}  // namespace

std::optional<TrainingSet> min_concept_teaching_set(const Instance& inst, const FeatureSet& features,
                                                    LearnerKind learner, const SearchBudget& budget) {
    inst.require_lattice_index(features);
    const FeaturizedPool pool = featurize_pool(inst, features);
    if (!is_sufficient(pool, learner)) return std::nullopt;
    auto found = smallest_subset(pool.size(), budget, [&](const std::vector<std::size_t>& objects) {
        return classifies_pool(pool, train_on(pool, learner, objects));
    });
    if (!found) throw std::logic_error("sufficient feature set without a concept teaching set");
    return honest_training_set(inst, *found);
}

std::optional<TrainingSet> min_invalidation_set(const Instance& inst, const FeatureSet& features,
                                                LearnerKind learner, const SearchBudget& budget) {
    inst.require_lattice_index(features);
    const FeaturizedPool pool = featurize_pool(inst, features);
    if (is_sufficient(pool, learner)) return std::nullopt;
    auto found = smallest_subset(pool.size(), budget, [&](const std::vector<std::size_t>& objects) {
        return has_training_error(pool, train_on(pool, learner, objects), objects);
    });
    if (!found) throw std::logic_error("insufficient feature set without an invalidation set");
    return honest_training_set(inst, *found);
}

CostVector fs_cost(const Instance& inst, const FeatureSet& features, LearnerKind learner,
                   const SearchBudget& budget) {
    auto size_of = [](const std::optional<TrainingSet>& t) {
        return t ? CostValue(t->size()) : CostValue::infinite();
    };
    return {features.size(), size_of(min_concept_teaching_set(inst, features, learner, budget)),
            size_of(min_invalidation_set(inst, features, learner, budget))};
}

}  // namespace teach
