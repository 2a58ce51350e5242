#include "teach/instance.hpp"

#include "teach/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace teach {

Label label_from_int(long long value) {
    if (value == 0) return Label::zero;
    if (value == 1) return Label::one;
    throw TeachError(ErrorCode::InvalidLabel, "labels must be 0 or 1, got " + std::to_string(value));
}

FeatureSet::FeatureSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool FeatureSet::contains(std::size_t feature) const {
    return std::binary_search(indices_.begin(), indices_.end(), feature);
}

bool FeatureSet::is_subset_of(const FeatureSet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

FeatureSet FeatureSet::with(std::size_t feature) const {
    std::vector<std::size_t> next = indices_;
    next.push_back(feature);
    return FeatureSet(std::move(next));
}

std::size_t Instance::object_index(std::string_view id) const {
    auto it = object_lookup_.find(id);
    if (it == object_lookup_.end()) {
        throw TeachError(ErrorCode::UnknownObject, "no object '" + std::string(id) + "'");
    }
    return it->second;
}

bool Instance::has_both_labels() const {
    bool zero = false, one = false;
    for (Label l : targets_) (l == Label::zero ? zero : one) = true;
    return zero && one;
}

std::size_t Instance::feature_index(std::string_view id) const {
    auto it = std::lower_bound(feature_ids_.begin(), feature_ids_.end(), id);
    if (it == feature_ids_.end() || *it != id) {
        throw TeachError(ErrorCode::UnknownFeature, "no feature '" + std::string(id) + "'");
    }
    return static_cast<std::size_t>(it - feature_ids_.begin());
}

std::optional<std::size_t> Instance::lattice_index(const FeatureSet& set) const {
    auto it = lattice_lookup_.find(set);
    if (it == lattice_lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t Instance::require_lattice_index(const FeatureSet& set) const {
    if (auto idx = lattice_index(set)) return *idx;
    throw TeachError(ErrorCode::FeatureSetNotInLattice, describe(set) + " is not a lattice member");
}

FeatureSet Instance::feature_set(std::span<const std::string> ids) const {
    std::vector<std::size_t> indices;
    indices.reserve(ids.size());
    for (const auto& id : ids) indices.push_back(feature_index(id));
    return FeatureSet(std::move(indices));
}

std::string Instance::describe(const FeatureSet& set) const {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += ',';
        out += feature_ids_.at(set.indices()[i]);
    }
    return out + "}";
}

std::string Instance::describe(const TrainingSet& set) const {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += ',';
        out += "(" + object_ids_.at(set[i].object) + "," + std::to_string(to_int(set[i].label)) + ")";
    }
    return out + "}";
}

nlohmann::json Instance::to_json() const {
    nlohmann::json doc;
    doc["objects"] = nlohmann::json::array();
    for (std::size_t i = 0; i < object_count(); ++i) {
        doc["objects"].push_back({{"id", object_ids_[i]}, {"label", to_int(targets_[i])}});
    }
    doc["features"] = nlohmann::json::array();
    for (std::size_t f = 0; f < feature_count(); ++f) {
        nlohmann::json values = nlohmann::json::object();
        for (std::size_t i = 0; i < object_count(); ++i) values[object_ids_[i]] = format_rational(values_[f][i]);
        doc["features"].push_back({{"id", feature_ids_[f]}, {"values", values}});
    }
    doc["lattice"] = nlohmann::json::array();
    for (const auto& set : lattice_) {
        nlohmann::json ids = nlohmann::json::array();
        for (auto f : set.indices()) ids.push_back(feature_ids_[f]);
        doc["lattice"].push_back(ids);
    }
    return doc;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw TeachError(ErrorCode::ParseError, what);
}

const nlohmann::json& require_key(const nlohmann::json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) parse_fail(std::string("missing key '") + key + "'");
    return obj.at(key);
}

std::string require_string(const nlohmann::json& v, const char* what) {
    if (!v.is_string()) parse_fail(std::string(what) + " must be a string");
    return v.get<std::string>();
}

Rational decode_value(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
    parse_fail("feature values must be rational strings");
}

}  // namespace

RawInstance parse_instance_document(const nlohmann::json& doc) {
    RawInstance raw;
    const auto& objects = require_key(doc, "objects");
    if (!objects.is_array()) parse_fail("'objects' must be a list");
    for (const auto& o : objects) {
        const auto& label = require_key(o, "label");
        if (!label.is_number_integer()) {
            throw TeachError(ErrorCode::InvalidLabel, "object labels must be integers 0 or 1");
        }
        raw.objects.push_back({require_string(require_key(o, "id"), "object id"), label.get<long long>()});
    }
    const auto& features = require_key(doc, "features");
    if (!features.is_array()) parse_fail("'features' must be a list");
    for (const auto& f : features) {
        RawInstance::Feature feature;
        feature.id = require_string(require_key(f, "id"), "feature id");
        const auto& values = require_key(f, "values");
        if (!values.is_object()) parse_fail("feature '" + feature.id + "' values must be a map");
        for (const auto& [object, v] : values.items()) feature.values.emplace(object, decode_value(v));
        raw.features.push_back(std::move(feature));
    }
    const auto& lattice = require_key(doc, "lattice");
    if (!lattice.is_array()) parse_fail("'lattice' must be a list of lists");
    for (const auto& set : lattice) {
        if (!set.is_array()) parse_fail("'lattice' must be a list of lists");
        std::vector<std::string> ids;
        for (const auto& id : set) ids.push_back(require_string(id, "lattice feature id"));
        raw.lattice.push_back(std::move(ids));
    }
    return raw;
}

Instance validate_instance(const RawInstance& raw) {
    Instance inst;
    if (raw.objects.empty()) parse_fail("object pool must be non-empty");
    for (const auto& o : raw.objects) {
        if (inst.object_lookup_.count(o.id)) {
            throw TeachError(ErrorCode::DuplicateObjectId, "object '" + o.id + "' declared twice");
        }
        inst.object_lookup_.emplace(o.id, inst.object_ids_.size());
        inst.object_ids_.push_back(o.id);
        inst.targets_.push_back(label_from_int(o.label));
    }

    std::vector<const RawInstance::Feature*> sorted;
    for (const auto& f : raw.features) sorted.push_back(&f);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i]->id == sorted[i + 1]->id) parse_fail("feature '" + sorted[i]->id + "' declared twice");
    }
    for (const auto* f : sorted) {
        std::vector<Rational> column(inst.object_count());
        for (const auto& [object, value] : f->values) {
            auto it = inst.object_lookup_.find(object);
            if (it == inst.object_lookup_.end()) {
                throw TeachError(ErrorCode::UnknownObject,
                                 "feature '" + f->id + "' has a value for unknown object '" + object + "'");
            }
            column[it->second] = value;
        }
        for (std::size_t i = 0; i < inst.object_count(); ++i) {
            if (!f->values.count(inst.object_ids_[i])) {
                throw TeachError(ErrorCode::MissingFeatureValue,
                                 "feature '" + f->id + "' has no value for object '" + inst.object_ids_[i] + "'");
            }
        }
        inst.feature_ids_.push_back(f->id);
        inst.values_.push_back(std::move(column));
    }

    std::set<FeatureSet> members;
    for (const auto& ids : raw.lattice) {
        std::vector<std::size_t> indices;
        for (const auto& id : ids) {
            auto it = std::lower_bound(inst.feature_ids_.begin(), inst.feature_ids_.end(), id);
            if (it == inst.feature_ids_.end() || *it != id) {
                throw TeachError(ErrorCode::UnknownFeatureId, "lattice references unknown feature '" + id + "'");
            }
            indices.push_back(static_cast<std::size_t>(it - inst.feature_ids_.begin()));
        }
        FeatureSet set(indices);
        if (set.size() != ids.size()) parse_fail("lattice member repeats a feature");
        members.insert(std::move(set));
    }
    if (!members.count(FeatureSet{})) {
        throw TeachError(ErrorCode::LatticeChainViolation, "lattice must contain the empty set {}");
    }
    inst.lattice_.assign(members.begin(), members.end());
    for (std::size_t i = 0; i < inst.lattice_.size(); ++i) inst.lattice_lookup_.emplace(inst.lattice_[i], i);

    for (const auto& set : inst.lattice_) {
        if (set.empty()) continue;
        bool has_predecessor = false;
        for (auto f : set.indices()) {
            std::vector<std::size_t> rest;
            for (auto g : set.indices())
                if (g != f) rest.push_back(g);
            if (inst.lattice_lookup_.count(FeatureSet(std::move(rest)))) {
                has_predecessor = true;
                break;
            }
        }
        if (!has_predecessor) {
            throw TeachError(ErrorCode::LatticeChainViolation,
                             inst.describe(set) + " has no lattice member one feature smaller");
        }
    }
    return inst;
}

Instance instance_from_json(const nlohmann::json& doc) {
    return validate_instance(parse_instance_document(doc));
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open instance file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail("'" + path.string() + "': " + e.what());
    }
    return instance_from_json(doc);
}

Point featurize(const Instance& inst, const FeatureSet& features, std::size_t object) {
    if (object >= inst.object_count()) {
        throw TeachError(ErrorCode::UnknownObject, "object index " + std::to_string(object) + " out of range");
    }
    Point p;
    p.reserve(features.size());
    for (auto f : features.indices()) {
        if (f >= inst.feature_count()) {
            throw TeachError(ErrorCode::UnknownFeature, "feature index " + std::to_string(f) + " out of range");
        }
        p.push_back(inst.value(f, object));
    }
    return p;
}

Point featurize(const Instance& inst, std::span<const std::string> feature_ids, std::string_view object_id) {
    return featurize(inst, inst.feature_set(feature_ids), inst.object_index(object_id));
}

std::vector<std::size_t> lattice_successor_features(const Instance& inst, const FeatureSet& features) {
    inst.require_lattice_index(features);
    std::vector<std::size_t> out;
    for (const auto& member : inst.lattice()) {
        if (member.size() != features.size() + 1 || !features.is_subset_of(member)) continue;
        for (auto f : member.indices()) {
            if (!features.contains(f)) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FeatureSet> lattice_chain(const Instance& inst, const FeatureSet& features) {
    inst.require_lattice_index(features);
    std::vector<FeatureSet> chain{features};
    while (!chain.back().empty()) {
        const FeatureSet& top = chain.back();
        std::optional<FeatureSet> predecessor;
        for (auto f : top.indices()) {
            std::vector<std::size_t> rest;
            for (auto g : top.indices())
                if (g != f) rest.push_back(g);
            FeatureSet candidate(std::move(rest));
            if (inst.lattice_index(candidate)) {
                predecessor = std::move(candidate);
                break;
            }
        }
        // Validation guarantees a predecessor for every non-empty member.
        chain.push_back(std::move(*predecessor));
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

bool is_honest(const Instance& inst, const TrainingSet& examples) {
    bool honest = true;
    for (const auto& e : examples) {
        if (e.object >= inst.object_count()) {
            throw TeachError(ErrorCode::UnknownObject, "object index " + std::to_string(e.object) + " out of range");
        }
        if (inst.target(e.object) != e.label) honest = false;
    }
    return honest;
}

bool is_honest(const Instance& inst, std::span<const std::pair<std::string, Label>> examples) {
    bool honest = true;
    for (const auto& [id, label] : examples) {
        if (inst.target(inst.object_index(id)) != label) honest = false;
    }
    return honest;
}

TrainingSet honest_training_set(const Instance& inst, std::span<const std::size_t> objects) {
    TrainingSet out;
    out.reserve(objects.size());
    for (auto o : objects) out.push_back({o, inst.target(o)});
    std::sort(out.begin(), out.end(), [](const Example& a, const Example& b) { return a.object < b.object; });
    return out;
}

}  // namespace teach
