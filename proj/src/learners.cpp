#include "teach/learners.hpp"

#include "teach/error.hpp"

#include <optional>

namespace teach {

std::string_view to_string(LearnerKind learner) {
    return learner == LearnerKind::linear ? "lin" : "1nn";
}

LearnerKind parse_learner(std::string_view text) {
    if (text == "lin" || text == "linear") return LearnerKind::linear;
    if (text == "1nn") return LearnerKind::one_nn;
    throw TeachError(ErrorCode::InvalidParams, "unknown learner '" + std::string(text) + "' (expected lin or 1nn)");
}

namespace {

void require_dimension(std::size_t got, std::size_t expected) {
    if (got != expected) {
        throw TeachError(ErrorCode::DimensionMismatch,
                         "point of dimension " + std::to_string(got) + ", expected " + std::to_string(expected));
    }
}

}  // namespace

Label Classifier::predict(const Point& x) const {
    if (const auto* c = std::get_if<Constant>(&model_)) return c->label;
    if (const auto* lin = std::get_if<Linear>(&model_)) {
        require_dimension(x.size(), lin->plane.weights.size());
        return lin->plane.evaluate(x) > 0 ? Label::one : Label::zero;
    }
    const auto& nn = std::get<OneNN>(model_);
    require_dimension(x.size(), nn.dimension);
    std::optional<Rational> best;
    Label label = Label::one;
    for (const auto& stored : nn.data) {
        Rational dist = squared_distance(stored.point, x);
        if (!best || dist < *best) {
            best = std::move(dist);
            label = stored.label;
        } else if (dist == *best && stored.label < label) {
            label = stored.label;
        }
    }
    return label;
}

Classifier train_1nn(std::size_t dimension, std::span<const LabeledPoint> data) {
    for (const auto& p : data) require_dimension(p.point.size(), dimension);
    if (data.empty()) return Classifier(Classifier::Constant{Label::zero});
    return Classifier(Classifier::OneNN{dimension, {data.begin(), data.end()}});
}

Classifier train_linear(std::size_t dimension, std::span<const LabeledPoint> data) {
    std::vector<Point> positive, negative;
    for (const auto& p : data) {
        require_dimension(p.point.size(), dimension);
        (p.label == Label::one ? positive : negative).push_back(p.point);
    }
    if (positive.empty() && negative.empty()) return Classifier(Classifier::Constant{Label::zero});
    if (positive.empty()) return Classifier(Classifier::Constant{Label::zero});
    if (negative.empty()) return Classifier(Classifier::Constant{Label::one});
    if (dimension == 0) return Classifier(Classifier::Constant{Label::zero});
    try {
        return Classifier(Classifier::Linear{bisector(closest_hull_pair(positive, negative, dimension))});
    } catch (const TeachError& e) {
        if (e.code() != ErrorCode::NotSeparable) throw;
        return Classifier(Classifier::Constant{Label::zero});
    }
}

Classifier train(LearnerKind learner, std::size_t dimension, std::span<const LabeledPoint> data) {
    return learner == LearnerKind::linear ? train_linear(dimension, data) : train_1nn(dimension, data);
}

bool same_hyperplane(const Hyperplane& a, const Hyperplane& b) {
    if (a.weights.size() != b.weights.size()) return false;
    // Find the ratio b/a from the first non-zero coordinate of a.
    std::optional<Rational> ratio;
    auto check = [&](const Rational& x, const Rational& y) {
        if (x == 0) return y == 0;
        Rational r = y / x;
        if (!ratio) ratio = r;
        return r == *ratio;
    };
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
        if (!check(a.weights[i], b.weights[i])) return false;
    }
    if (!check(a.offset, b.offset)) return false;
    return ratio && *ratio > 0;
}

}  // namespace teach
