#pragma once

#include "teach/costs.hpp"
#include "teach/instance.hpp"
#include "teach/protocol.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teach {

// ---- generators -----------------------------------------------------------

enum class LabelMode {
    separable,     // labels from a random hyperplane over all d features
    general,       // uniform labels
    insufficient,  // uniform labels, redrawn until the full feature set is not linearly separable
};

enum class LatticeKind { chain, powerset };

std::string_view to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view text);
std::string_view to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view text);

struct GeneratorParams {
    std::size_t dimension = 1;
    std::size_t pool_size = 4;
    Rational coord_low = 0;
    Rational coord_high = 4;
    std::size_t max_denominator = 2;
    std::uint64_t seed = 0;
    LabelMode mode = LabelMode::separable;
    LatticeKind lattice = LatticeKind::powerset;
};

// Deterministic in the params. Every generated instance has both labels
// whenever pool_size >= 2. Throws InvalidParams / ConstructionFailed.
Instance generate_random_instance(const GeneratorParams& params);

// Negative origin and positives 2·e_i (plus the all-twos corner); the d
// features need d + 1 labeled objects. Requires d >= 2.
Instance generate_concept_spec_tightness(std::size_t dimension);

// d + 2 objects on the moment curve (i, i^2, ..., i^d) with alternating
// labels: every proper subset separable, the whole pool not. Requires d >= 1.
Instance generate_invalidation_tightness(std::size_t dimension);

// k class-0 objects at (0, 2i) and k class-1 objects at (1, 2i + 1) on the
// chain {} ⊂ {f1} ⊂ {f1,f2}. 1NN needs 2 labels with {f1} and all 2k with
// {f1,f2}. Requires k >= 2.
Instance generate_1nn_explosion(std::size_t k);

// Small hand-written instances: "thresh4", "xor4", "coll", "edf-chain".
Instance named_instance(std::string_view name);

// ---- property checks ------------------------------------------------------

enum class PropertyId { P1, P2, P3, P4, P5, P6, P7, P8, P9, L1 };

std::string_view to_string(PropertyId id);
PropertyId parse_property(std::string_view text);
std::vector<PropertyId> all_properties();

struct Violation {
    std::size_t instance;       // position in the checked list
    nlohmann::json document;    // full instance for replay
    std::string feature_set;
    std::string learner;
    std::string detail;
};

struct PropertyReport {
    PropertyId property;
    std::size_t instances_tried = 0;
    std::size_t checks = 0;
    std::vector<Violation> violations;
    bool incomplete = false;
    std::string incomplete_reason;

    bool passed() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

PropertyReport check_property(PropertyId property, std::span<const Instance> instances,
                              const SearchBudget& budget = {});

// ---- seeded suites --------------------------------------------------------

// Mixes a suite seed with a trial index (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// d cycles through 1..3, n <= 12, power-set lattices.
std::vector<Instance> separable_suite(std::uint64_t seed, std::size_t count);
std::vector<Instance> insufficient_suite(std::uint64_t seed, std::size_t count);
// d = 3 chain lattices, n <= 10, labels separable over the full chain top.
std::vector<Instance> chain_suite(std::uint64_t seed, std::size_t count);
// generate_1nn_explosion(k) for k = 2..5.
std::vector<Instance> explosion_suite();

struct VerifyOptions {
    std::vector<PropertyId> properties = all_properties();
    std::uint64_t seed = 42;
    std::size_t trials = 20;
    SearchBudget budget;
    std::vector<Instance> extra_instances;
};

struct VerificationResult {
    std::vector<PropertyReport> reports;

    bool passed() const;
    bool incomplete() const;
    nlohmann::json to_json(const VerifyOptions& options) const;
};

VerificationResult run_verification(const VerifyOptions& options);

}  // namespace teach
