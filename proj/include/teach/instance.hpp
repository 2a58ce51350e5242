#pragma once

#include "teach/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teach {

enum class Label : std::uint8_t { zero = 0, one = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_int(long long value);

// A set of features, stored as sorted indices into Instance::feature_ids().
// Feature ids are kept in lexicographic order, so index order is the
// canonical coordinate order.
class FeatureSet {
public:
    FeatureSet() = default;
    explicit FeatureSet(std::vector<std::size_t> indices);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(std::size_t feature) const;
    bool is_subset_of(const FeatureSet& other) const;
    FeatureSet with(std::size_t feature) const;

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

    // Canonical order: by cardinality, then lexicographic on indices.
    friend bool operator<(const FeatureSet& a, const FeatureSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.indices_ < b.indices_;
    }

private:
    std::vector<std::size_t> indices_;
};

struct Example {
    std::size_t object;
    Label label;

    friend bool operator==(const Example&, const Example&) = default;
};

// Examples sorted by object index, no duplicates.
using TrainingSet = std::vector<Example>;

// Decoded but unvalidated instance document.
struct RawInstance {
    struct Object {
        std::string id;
        long long label;
    };
    struct Feature {
        std::string id;
        std::map<std::string, Rational> values;
    };
    std::vector<Object> objects;
    std::vector<Feature> features;
    std::vector<std::vector<std::string>> lattice;
};

// Finite object pool with binary targets, extensional feature tables and a
// feature lattice. Immutable once validated.
class Instance {
public:
    std::size_t object_count() const { return object_ids_.size(); }
    const std::string& object_id(std::size_t object) const { return object_ids_.at(object); }
    std::size_t object_index(std::string_view id) const;
    Label target(std::size_t object) const { return targets_.at(object); }
    const std::vector<Label>& targets() const { return targets_; }
    bool has_both_labels() const;

    std::size_t feature_count() const { return feature_ids_.size(); }
    const std::vector<std::string>& feature_ids() const { return feature_ids_; }
    const std::string& feature_id(std::size_t feature) const { return feature_ids_.at(feature); }
    std::size_t feature_index(std::string_view id) const;
    const Rational& value(std::size_t feature, std::size_t object) const { return values_[feature][object]; }

    // Members in canonical order (cardinality, then lexicographic).
    const std::vector<FeatureSet>& lattice() const { return lattice_; }
    std::optional<std::size_t> lattice_index(const FeatureSet& set) const;
    std::size_t require_lattice_index(const FeatureSet& set) const;

    FeatureSet feature_set(std::span<const std::string> ids) const;
    std::string describe(const FeatureSet& set) const;
    std::string describe(const TrainingSet& set) const;

    nlohmann::json to_json() const;

    friend Instance validate_instance(const RawInstance& raw);

private:
    Instance() = default;

    std::vector<std::string> object_ids_;
    std::map<std::string, std::size_t, std::less<>> object_lookup_;
    std::vector<Label> targets_;
    std::vector<std::string> feature_ids_;
    std::vector<std::vector<Rational>> values_;
    std::vector<FeatureSet> lattice_;
    std::map<FeatureSet, std::size_t> lattice_lookup_;
};

RawInstance parse_instance_document(const nlohmann::json& doc);
Instance validate_instance(const RawInstance& raw);
Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);

Point featurize(const Instance& inst, const FeatureSet& features, std::size_t object);
Point featurize(const Instance& inst, std::span<const std::string> feature_ids, std::string_view object_id);

// Features f with F ∪ {f} in the lattice.
std::vector<std::size_t> lattice_successor_features(const Instance& inst, const FeatureSet& features);

// ∅ = F_0 ⊂ F_1 ⊂ ... ⊂ F_k = F, all inside the lattice, |F_i| = i.
std::vector<FeatureSet> lattice_chain(const Instance& inst, const FeatureSet& features);

bool is_honest(const Instance& inst, const TrainingSet& examples);
bool is_honest(const Instance& inst, std::span<const std::pair<std::string, Label>> examples);

// The honest training set over the given objects.
TrainingSet honest_training_set(const Instance& inst, std::span<const std::size_t> objects);

}  // namespace teach
