#include "teach/verifier.hpp"

#include "teach/error.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace teach {

std::string_view to_string(PropertyId id) {
    switch (id) {
        case PropertyId::P1: return "P1";
        case PropertyId::P2: return "P2";
        case PropertyId::P3: return "P3";
        case PropertyId::P4: return "P4";
        case PropertyId::P5: return "P5";
        case PropertyId::P6: return "P6";
        case PropertyId::P7: return "P7";
        case PropertyId::P8: return "P8";
        case PropertyId::P9: return "P9";
        case PropertyId::L1: return "L1";
    }
    return "?";
}

PropertyId parse_property(std::string_view text) {
    for (auto id : all_properties()) {
        if (to_string(id) == text) return id;
    }
    throw TeachError(ErrorCode::InvalidParams, "unknown property '" + std::string(text) + "'");
}

std::vector<PropertyId> all_properties() {
    return {PropertyId::P1, PropertyId::P2, PropertyId::P3, PropertyId::P4, PropertyId::P5,
            PropertyId::P6, PropertyId::P7, PropertyId::P8, PropertyId::P9, PropertyId::L1};
}

nlohmann::json PropertyReport::to_json() const {
    nlohmann::json doc;
    doc["property"] = std::string(to_string(property));
    doc["status"] = passed() ? "pass" : "fail";
    doc["instances"] = instances_tried;
    doc["checks"] = checks;
    doc["incomplete"] = incomplete;
    if (incomplete) doc["incomplete_reason"] = incomplete_reason;
    doc["violations"] = nlohmann::json::array();
    for (const auto& v : violations) {
        doc["violations"].push_back({{"instance_index", v.instance},
                                     {"feature_set", v.feature_set},
                                     {"learner", v.learner},
                                     {"detail", v.detail},
                                     {"instance", v.document}});
    }
    return doc;
}

namespace {

constexpr LearnerKind kLearners[] = {LearnerKind::one_nn, LearnerKind::linear};

// Memoized oracle answers for one instance.
class Oracles {
public:
    Oracles(const Instance& inst, const SearchBudget& budget) : inst_(inst), budget_(budget) {}

    bool sufficient(std::size_t set, LearnerKind learner) {
        auto key = std::make_pair(set, learner);
        auto it = sufficient_.find(key);
        if (it == sufficient_.end()) it = sufficient_.emplace(key, is_sufficient(pool(set), learner)).first;
        return it->second;
    }

    const std::optional<TrainingSet>& concept_set(std::size_t set, LearnerKind learner) {
        auto key = std::make_pair(set, learner);
        auto it = concept_.find(key);
        if (it == concept_.end()) {
            it = concept_.emplace(key, min_concept_teaching_set(inst_, inst_.lattice()[set], learner, budget_)).first;
        }
        return it->second;
    }

    const std::optional<TrainingSet>& invalidation_set(std::size_t set, LearnerKind learner) {
        auto key = std::make_pair(set, learner);
        auto it = invalidation_.find(key);
        if (it == invalidation_.end()) {
            it = invalidation_.emplace(key, min_invalidation_set(inst_, inst_.lattice()[set], learner, budget_))
                     .first;
        }
        return it->second;
    }

    const FeaturizedPool& pool(std::size_t set) {
        auto it = pools_.find(set);
        if (it == pools_.end()) it = pools_.emplace(set, featurize_pool(inst_, inst_.lattice()[set])).first;
        return it->second;
    }

private:
    const Instance& inst_;
    SearchBudget budget_;
    std::map<std::pair<std::size_t, LearnerKind>, bool> sufficient_;
    std::map<std::pair<std::size_t, LearnerKind>, std::optional<TrainingSet>> concept_;
    std::map<std::pair<std::size_t, LearnerKind>, std::optional<TrainingSet>> invalidation_;
    std::map<std::size_t, FeaturizedPool> pools_;
};

std::vector<std::size_t> objects_of(const TrainingSet& t) {
    std::vector<std::size_t> out;
    for (const auto& e : t) out.push_back(e.object);
    return out;
}

std::string size_str(const std::optional<TrainingSet>& t) {
    return t ? std::to_string(t->size()) : std::string("inf");
}

class Checker {
public:
    Checker(PropertyReport& report, const Instance& inst, std::size_t index, const SearchBudget& budget)
        : report_(report), inst_(inst), index_(index), oracles_(inst, budget), budget_(budget) {}

    void run(PropertyId property) {
        switch (property) {
            case PropertyId::P1: return duality();
            case PropertyId::P2: return monotone();
            case PropertyId::P3: return reuse();
            case PropertyId::P4: return open_cost();
            case PropertyId::P5: return edf_cost();
            case PropertyId::P6: return explosion();
            case PropertyId::P7: return concept_bound();
            case PropertyId::P8: return one_nn_invalidation();
            case PropertyId::P9: return linear_invalidation();
            case PropertyId::L1: return lemma_support();
        }
    }

private:
    const std::vector<FeatureSet>& lattice() const { return inst_.lattice(); }

    void expect(bool ok, std::size_t set, LearnerKind learner, const std::string& detail) {
        ++report_.checks;
        if (ok) return;
        report_.violations.push_back(
            {index_, inst_.to_json(), inst_.describe(lattice()[set]), std::string(to_string(learner)), detail});
    }

    void duality() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            for (auto learner : kLearners) {
                const bool suff = oracles_.sufficient(s, learner);
                const auto& inv = oracles_.invalidation_set(s, learner);
                const auto& concept_set = oracles_.concept_set(s, learner);
                expect(!(inv && suff), s, learner, "finite invalidation set on a sufficient feature set");
                expect(suff == !inv.has_value(), s, learner, "sufficiency disagrees with invalidation cost");
                expect(!suff == !concept_set.has_value(), s, learner, "insufficiency disagrees with concept cost");
                const FeaturizedPool& pool = oracles_.pool(s);
                if (inv) {
                    auto objs = objects_of(*inv);
                    expect(has_training_error(pool, train_on(pool, learner, objs), objs), s, learner,
                           "returned invalidation set " + inst_.describe(*inv) + " has no training error");
                }
                if (concept_set) {
                    expect(classifies_pool(pool, train_on(pool, learner, objects_of(*concept_set))), s, learner,
                           "returned teaching set " + inst_.describe(*concept_set) + " does not teach c*");
                }
            }
        }
    }

    void monotone() {
        for (std::size_t a = 0; a < lattice().size(); ++a) {
            for (std::size_t b = 0; b < lattice().size(); ++b) {
                if (a == b || !lattice()[a].is_subset_of(lattice()[b])) continue;
                for (auto learner : kLearners) {
                    expect(!oracles_.sufficient(a, learner) || oracles_.sufficient(b, learner), b, learner,
                           "superset of sufficient " + inst_.describe(lattice()[a]) + " is insufficient");
                }
            }
        }
    }

    void reuse() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            const auto& inv = oracles_.invalidation_set(s, LearnerKind::linear);
            if (!inv) continue;
            const auto objs = objects_of(*inv);
            for (std::size_t sub = 0; sub < lattice().size(); ++sub) {
                if (sub == s || !lattice()[sub].is_subset_of(lattice()[s])) continue;
                const FeaturizedPool& pool = oracles_.pool(sub);
                expect(has_training_error(pool, train_on(pool, LearnerKind::linear, objs), objs), sub,
                       LearnerKind::linear,
                       "invalidation set " + inst_.describe(*inv) + " of " + inst_.describe(lattice()[s]) +
                           " does not invalidate this subset");
            }
        }
    }

    void open_cost() {
        if (!inst_.has_both_labels()) return;
        auto costs = optimal_teaching_costs(inst_, LearnerKind::linear, Protocol::open, budget());
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            if (!oracles_.sufficient(s, LearnerKind::linear)) continue;
            const std::size_t bound = lattice()[s].size() + 1;
            expect(costs[s].labels <= CostValue(bound), s, LearnerKind::linear,
                   "Open label cost " + costs[s].labels.str() + " exceeds |F|+1 = " + std::to_string(bound));
        }
    }

    void edf_cost() {
        if (!inst_.has_both_labels()) return;
        auto costs = optimal_teaching_costs(inst_, LearnerKind::linear, Protocol::error_driven, budget());
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            if (!oracles_.sufficient(s, LearnerKind::linear)) continue;
            bool minimal = true;
            for (std::size_t sub = 0; sub < lattice().size(); ++sub) {
                if (sub != s && lattice()[sub].is_subset_of(lattice()[s]) &&
                    oracles_.sufficient(sub, LearnerKind::linear)) {
                    minimal = false;
                }
            }
            if (!minimal) continue;
            const std::size_t bound = 2 * (lattice()[s].size() + 1);
            expect(costs[s].labels <= CostValue(bound), s, LearnerKind::linear,
                   "EDF label cost " + costs[s].labels.str() + " exceeds 2(|F|+1) = " + std::to_string(bound));
        }
    }

    void explosion() {
        // Chain {} ⊂ {f} ⊂ {f, g}: cost 2 with one feature, whole pool with two.
        std::optional<std::size_t> one, two;
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            if (lattice()[s].size() == 1 && !one) one = s;
            if (lattice()[s].size() == 2 && !two) two = s;
        }
        if (!one || !two || !lattice()[*one].is_subset_of(lattice()[*two])) {
            expect(false, 0, LearnerKind::one_nn, "instance is not a two-level chain");
            return;
        }
        const auto& small = oracles_.concept_set(*one, LearnerKind::one_nn);
        const auto& large = oracles_.concept_set(*two, LearnerKind::one_nn);
        expect(small && small->size() == 2, *one, LearnerKind::one_nn,
               "1NN concept cost " + size_str(small) + ", expected 2");
        expect(large && large->size() == inst_.object_count(), *two, LearnerKind::one_nn,
               "1NN concept cost " + size_str(large) + ", expected |X| = " + std::to_string(inst_.object_count()));
    }

    void concept_bound() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            const auto& t = oracles_.concept_set(s, LearnerKind::linear);
            if (!t) continue;
            expect(t->size() <= lattice()[s].size() + 1, s, LearnerKind::linear,
                   "concept cost " + std::to_string(t->size()) + " exceeds d+1");
        }
    }

    void one_nn_invalidation() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            const auto& t = oracles_.invalidation_set(s, LearnerKind::one_nn);
            if (!t) continue;
            expect(t->size() == 2, s, LearnerKind::one_nn,
                   "1NN invalidation cost " + std::to_string(t->size()) + ", expected 2");
        }
    }

    void linear_invalidation() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            const auto& t = oracles_.invalidation_set(s, LearnerKind::linear);
            if (!t) continue;
            expect(t->size() <= lattice()[s].size() + 2, s, LearnerKind::linear,
                   "invalidation cost " + std::to_string(t->size()) + " exceeds d+2");
        }
    }

    void lemma_support() {
        for (std::size_t s = 0; s < lattice().size(); ++s) {
            const FeaturizedPool& pool = oracles_.pool(s);
            if (pool.dimension == 0 || !oracles_.sufficient(s, LearnerKind::linear)) continue;
            std::vector<Point> positive, negative;
            std::vector<std::size_t> pos_objects, neg_objects;
            for (std::size_t x = 0; x < pool.size(); ++x) {
                if (pool.labels[x] == Label::one) {
                    positive.push_back(pool.points[x]);
                    pos_objects.push_back(x);
                } else {
                    negative.push_back(pool.points[x]);
                    neg_objects.push_back(x);
                }
            }
            if (positive.empty() || negative.empty()) continue;
            const SupportSet support = support_reduction(positive, negative, pool.dimension);
            expect(support.size() <= pool.dimension + 1, s, LearnerKind::linear,
                   "support of size " + std::to_string(support.size()) + " exceeds d+1");
            std::vector<std::size_t> objects;
            for (auto i : support.positive) objects.push_back(pos_objects[i]);
            for (auto i : support.negative) objects.push_back(neg_objects[i]);
            const Classifier reduced = train_on(pool, LearnerKind::linear, objects);
            std::vector<std::size_t> all(pool.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            const Classifier full = train_on(pool, LearnerKind::linear, all);
            bool agree = true;
            for (const auto& p : pool.points) agree = agree && reduced.predict(p) == full.predict(p);
            expect(agree && classifies_pool(pool, reduced), s, LearnerKind::linear,
                   "hyperplane retrained on the support disagrees with the full-data hyperplane");
        }
    }

    SearchBudget budget() const { return budget_; }

    PropertyReport& report_;
    const Instance& inst_;
    std::size_t index_;
    Oracles oracles_;
    SearchBudget budget_;
};

}  // namespace

PropertyReport check_property(PropertyId property, std::span<const Instance> instances, const SearchBudget& budget) {
    PropertyReport report;
    report.property = property;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        ++report.instances_tried;
        try {
            Checker(report, instances[i], i, budget).run(property);
        } catch (const TeachError& e) {
            if (e.code() != ErrorCode::BudgetExceeded) throw;
            report.incomplete = true;
            if (report.incomplete_reason.empty()) {
                report.incomplete_reason = "instance " + std::to_string(i) + ": " + e.what();
            }
        }
    }
    return report;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ stream) ^ index);
}

namespace {

std::vector<Instance> random_suite(std::uint64_t seed, std::uint64_t stream, std::size_t count, LabelMode mode,
                                   LatticeKind lattice, std::size_t min_extra, std::size_t max_pool) {
    std::vector<Instance> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = derive_seed(seed, stream, i);
        GeneratorParams p;
        p.dimension = 1 + i % 3;
        const std::size_t min_pool = p.dimension + min_extra;
        p.pool_size = min_pool + s % (max_pool - min_pool + 1);
        p.coord_low = 0;
        p.coord_high = 4;
        p.max_denominator = 2;
        p.seed = s;
        p.mode = mode;
        p.lattice = lattice;
        out.push_back(generate_random_instance(p));
    }
    return out;
}

}  // namespace

std::vector<Instance> separable_suite(std::uint64_t seed, std::size_t count) {
    return random_suite(seed, 1, count, LabelMode::separable, LatticeKind::powerset, 2, 12);
}

std::vector<Instance> insufficient_suite(std::uint64_t seed, std::size_t count) {
    return random_suite(seed, 2, count, LabelMode::insufficient, LatticeKind::powerset, 3, 12);
}

std::vector<Instance> chain_suite(std::uint64_t seed, std::size_t count) {
    return random_suite(seed, 3, count, LabelMode::separable, LatticeKind::chain, 2, 10);
}

std::vector<Instance> explosion_suite() {
    std::vector<Instance> out;
    for (std::size_t k = 2; k <= 5; ++k) out.push_back(generate_1nn_explosion(k));
    return out;
}

bool VerificationResult::passed() const {
    return std::all_of(reports.begin(), reports.end(), [](const PropertyReport& r) { return r.passed(); });
}

bool VerificationResult::incomplete() const {
    return std::any_of(reports.begin(), reports.end(), [](const PropertyReport& r) { return r.incomplete; });
}

nlohmann::json VerificationResult::to_json(const VerifyOptions& options) const {
    nlohmann::json doc;
    doc["seed"] = options.seed;
    doc["trials"] = options.trials;
    doc["status"] = passed() ? "pass" : "fail";
    doc["incomplete"] = incomplete();
    doc["properties"] = nlohmann::json::array();
    for (const auto& r : reports) doc["properties"].push_back(r.to_json());
    return doc;
}

VerificationResult run_verification(const VerifyOptions& options) {
    std::optional<std::vector<Instance>> general, chains, explosions;
    auto general_suite = [&]() -> const std::vector<Instance>& {
        if (!general) {
            general = separable_suite(options.seed, options.trials);
            auto insufficient = insufficient_suite(options.seed, options.trials);
            general->insert(general->end(), insufficient.begin(), insufficient.end());
            for (std::size_t d = 2; d <= 3; ++d) general->push_back(generate_concept_spec_tightness(d));
            for (std::size_t d = 1; d <= 3; ++d) general->push_back(generate_invalidation_tightness(d));
            for (auto name : {"thresh4", "xor4", "coll", "edf-chain"}) general->push_back(named_instance(name));
            general->insert(general->end(), options.extra_instances.begin(), options.extra_instances.end());
        }
        return *general;
    };
    auto chain_instances = [&]() -> const std::vector<Instance>& {
        if (!chains) {
            chains = chain_suite(options.seed, options.trials);
            chains->push_back(named_instance("thresh4"));
            chains->push_back(named_instance("edf-chain"));
            for (const auto& inst : options.extra_instances) {
                if (inst.object_count() <= 12) chains->push_back(inst);
            }
        }
        return *chains;
    };

    VerificationResult result;
    for (auto property : options.properties) {
        switch (property) {
            case PropertyId::P4:
            case PropertyId::P5:
                result.reports.push_back(check_property(property, chain_instances(), options.budget));
                break;
            case PropertyId::P6:
                if (!explosions) explosions = explosion_suite();
                result.reports.push_back(check_property(property, *explosions, options.budget));
                break;
            default:
                result.reports.push_back(check_property(property, general_suite(), options.budget));
                break;
        }
    }
    return result;
}

}  // namespace teach
