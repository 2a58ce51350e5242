#pragma once

#include "teach/geometry.hpp"
#include "teach/instance.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace teach {

enum class LearnerKind { one_nn, linear };

std::string_view to_string(LearnerKind learner);
LearnerKind parse_learner(std::string_view text);  // "1nn" | "lin"

struct LabeledPoint {
    Point point;
    Label label;
};

// Output of a learner: a hypothesis over R^d.
class Classifier {
public:
    struct Constant {
        Label label;
    };
    struct OneNN {
        std::size_t dimension;
        std::vector<LabeledPoint> data;
    };
    struct Linear {
        Hyperplane plane;
    };
    using Variant = std::variant<Constant, OneNN, Linear>;

    explicit Classifier(Variant model) : model_(std::move(model)) {}

    const Variant& model() const { return model_; }
    bool is_constant() const { return std::holds_alternative<Constant>(model_); }
    bool is_linear() const { return std::holds_alternative<Linear>(model_); }
    bool is_one_nn() const { return std::holds_alternative<OneNN>(model_); }

    // 1NN: minimal label among the closest stored points.
    // Linear: 1 iff w·x + b > 0. Constant accepts any dimension.
    Label predict(const Point& x) const;

private:
    Variant model_;
};

Classifier train_1nn(std::size_t dimension, std::span<const LabeledPoint> data);

// Max-margin hyperplane when both classes are present and strictly
// separable; constant classifiers otherwise (see README for conventions).
Classifier train_linear(std::size_t dimension, std::span<const LabeledPoint> data);

Classifier train(LearnerKind learner, std::size_t dimension, std::span<const LabeledPoint> data);

inline Label predict(const Classifier& c, const Point& x) { return c.predict(x); }

// (w, b) and (w2, b2) are positive multiples of each other.
bool same_hyperplane(const Hyperplane& a, const Hyperplane& b);

}  // namespace teach
