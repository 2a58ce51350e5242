#pragma once

#include "teach/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace teach {

struct WeightedIndex {
    std::size_t index;
    Rational weight;
};

// w·x + b. Positive side is label 1.
struct Hyperplane {
    Point weights;
    Rational offset;

    Rational evaluate(const Point& x) const { return dot(weights, x) + offset; }
};

// Exact minimum-norm point of conv(vertices) with its barycentric
// certificate (Wolfe's corral iteration, rational arithmetic).
struct MinNormPoint {
    Point point;
    std::vector<WeightedIndex> weights;
};

MinNormPoint min_norm_point(std::span<const Point> vertices);

// Closest pair between conv(positive) and conv(negative).
// Supports index into the input spans; weights are positive and sum to 1.
struct HullPair {
    Point positive;
    Point negative;
    Rational squared_distance;
    std::vector<WeightedIndex> positive_support;
    std::vector<WeightedIndex> negative_support;
};

// Throws EmptyClass, NotSeparable, DimensionMismatch. The returned supports
// are already reduced: |positive_support| + |negative_support| <= d + 1.
HullPair closest_hull_pair(std::span<const Point> positive, std::span<const Point> negative, std::size_t dimension);

// Witness hyperplane if some (w, b) puts all positives strictly on the
// positive side and all negatives strictly on the negative side.
std::optional<Hyperplane> strict_separability(std::span<const Point> positive, std::span<const Point> negative,
                                              std::size_t dimension);

// Perpendicular bisector of a closest pair; the maximum-margin hyperplane.
Hyperplane bisector(const HullPair& pair);

struct SupportSet {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;

    std::size_t size() const { return positive.size() + negative.size(); }
};

// At most d + 1 input points whose max-margin hyperplane coincides with the
// one for all points.
SupportSet support_reduction(std::span<const Point> positive, std::span<const Point> negative,
                             std::size_t dimension);

namespace linalg {

using Matrix = std::vector<std::vector<Rational>>;

// Unique solution of A x = b, or nullopt when A is singular.
std::optional<std::vector<Rational>> solve(Matrix a, std::vector<Rational> b);

// A non-zero vector v with A v = 0, or nullopt when the columns are independent.
std::optional<std::vector<Rational>> null_vector(Matrix a);

}  // namespace linalg

}  // namespace teach
