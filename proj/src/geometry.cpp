#include "teach/geometry.hpp"

#include "teach/error.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace teach {

namespace linalg {

namespace {

// In-place reduced row echelon form; returns pivot column of each pivot row.
std::vector<std::size_t> rref(Matrix& a) {
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t sel = row;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[row]);
        const Rational inv = 1 / a[row][col];
        for (std::size_t c = col; c < cols; ++c) a[row][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || a[r][col] == 0) continue;
            const Rational factor = a[r][col];
            for (std::size_t c = col; c < cols; ++c) a[r][c] -= factor * a[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::optional<std::vector<Rational>> solve(Matrix a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) a[r].push_back(b[r]);
    auto pivots = rref(a);
    if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n];
    return x;
}

std::optional<std::vector<Rational>> null_vector(Matrix a) {
    if (a.empty()) return std::nullopt;
    const std::size_t cols = a[0].size();
    auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
        return v;
    }
    return std::nullopt;
}

}  // namespace linalg

namespace {

void check_dimension(std::span<const Point> points, std::size_t dimension) {
    for (const auto& p : points) {
        if (p.size() != dimension) {
            throw TeachError(ErrorCode::DimensionMismatch, "point of dimension " + std::to_string(p.size()) +
                                                               ", expected " + std::to_string(dimension));
        }
    }
}

Point combine(std::span<const Point> vertices, const std::vector<std::size_t>& corral,
              const std::vector<Rational>& weights) {
    Point x(vertices[corral.front()].size(), Rational(0));
    for (std::size_t k = 0; k < corral.size(); ++k) {
        if (weights[k] == 0) continue;
        const Point& v = vertices[corral[k]];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += weights[k] * v[i];
    }
    return x;
}

// Affine combination of the corral points with minimum norm.
std::vector<Rational> affine_minimizer(std::span<const Point> vertices, const std::vector<std::size_t>& corral) {
    const std::size_t k = corral.size();
    linalg::Matrix a(k + 1, std::vector<Rational>(k + 1, Rational(0)));
    std::vector<Rational> b(k + 1, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            a[i][j] = dot(vertices[corral[i]], vertices[corral[j]]);
            a[j][i] = a[i][j];
        }
        a[i][k] = 1;
        a[k][i] = 1;
    }
    b[k] = 1;
    auto sol = linalg::solve(std::move(a), std::move(b));
    if (!sol) throw std::logic_error("corral lost affine independence");
    sol->pop_back();
    return *sol;
}

}  // namespace

MinNormPoint min_norm_point(std::span<const Point> vertices) {
    if (vertices.empty()) throw TeachError(ErrorCode::EmptyClass, "min_norm_point of an empty set");

    std::size_t start = 0;
    Rational best = squared_norm(vertices[0]);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        Rational n = squared_norm(vertices[i]);
        if (n < best) {
            best = n;
            start = i;
        }
    }
    std::vector<std::size_t> corral{start};
    std::vector<Rational> lambda{Rational(1)};
    Point x = vertices[start];

    // Each major cycle strictly lowers ||x||, so the corral never repeats.
    for (std::size_t major = 0;; ++major) {
        if (major > 64 * vertices.size() + 1024) throw std::logic_error("min_norm_point failed to converge");
        const Rational xx = squared_norm(x);
        std::size_t entering = 0;
        Rational lowest = dot(x, vertices[0]);
        for (std::size_t i = 1; i < vertices.size(); ++i) {
            Rational v = dot(x, vertices[i]);
            if (v < lowest) {
                lowest = std::move(v);
                entering = i;
            }
        }
        if (lowest >= xx) break;

        corral.push_back(entering);
        lambda.emplace_back(0);
        for (;;) {
            std::vector<Rational> alpha = affine_minimizer(vertices, corral);
            if (std::all_of(alpha.begin(), alpha.end(), [](const Rational& a) { return a > 0; })) {
                lambda = std::move(alpha);
                x = combine(vertices, corral, lambda);
                break;
            }
            std::optional<Rational> theta;
            for (std::size_t k = 0; k < corral.size(); ++k) {
                if (alpha[k] > 0) continue;
                Rational t = lambda[k] / (lambda[k] - alpha[k]);
                if (!theta || t < *theta) theta = t;
            }
            for (std::size_t k = 0; k < corral.size(); ++k) {
                lambda[k] = *theta * alpha[k] + (1 - *theta) * lambda[k];
            }
            std::vector<std::size_t> kept;
            std::vector<Rational> kept_lambda;
            for (std::size_t k = 0; k < corral.size(); ++k) {
                if (lambda[k] > 0) {
                    kept.push_back(corral[k]);
                    kept_lambda.push_back(lambda[k]);
                }
            }
            corral = std::move(kept);
            lambda = std::move(kept_lambda);
            x = combine(vertices, corral, lambda);
        }
    }

    MinNormPoint out{std::move(x), {}};
    for (std::size_t k = 0; k < corral.size(); ++k) out.weights.push_back({corral[k], lambda[k]});
    std::sort(out.weights.begin(), out.weights.end(),
              [](const WeightedIndex& a, const WeightedIndex& b) { return a.index < b.index; });
    return out;
}

namespace {

// Carathéodory-style reduction of a closest-pair certificate. Columns are
// (p_i, 1, 0) for positives and (-n_j, 0, 1) for negatives; every support
// point lies on its supporting hyperplane, so independent columns number at
// most d + 1.
void reduce_support(std::span<const Point> positive, std::span<const Point> negative, std::size_t dimension,
                    std::vector<WeightedIndex>& pos_support, std::vector<WeightedIndex>& neg_support) {
    for (;;) {
        const std::size_t k = pos_support.size() + neg_support.size();
        linalg::Matrix a(dimension + 2, std::vector<Rational>(k, Rational(0)));
        for (std::size_t c = 0; c < pos_support.size(); ++c) {
            const Point& p = positive[pos_support[c].index];
            for (std::size_t r = 0; r < dimension; ++r) a[r][c] = p[r];
            a[dimension][c] = 1;
        }
        for (std::size_t c = 0; c < neg_support.size(); ++c) {
            const Point& n = negative[neg_support[c].index];
            const std::size_t col = pos_support.size() + c;
            for (std::size_t r = 0; r < dimension; ++r) a[r][col] = -n[r];
            a[dimension + 1][col] = 1;
        }
        auto v = linalg::null_vector(std::move(a));
        if (!v) return;

        auto weight = [&](std::size_t c) -> Rational& {
            return c < pos_support.size() ? pos_support[c].weight : neg_support[c - pos_support.size()].weight;
        };
        if (std::none_of(v->begin(), v->end(), [](const Rational& r) { return r > 0; })) {
            for (auto& r : *v) r = -r;
        }
        std::optional<Rational> step;
        for (std::size_t c = 0; c < k; ++c) {
            if ((*v)[c] <= 0) continue;
            Rational t = weight(c) / (*v)[c];
            if (!step || t < *step) step = t;
        }
        for (std::size_t c = 0; c < k; ++c) weight(c) -= *step * (*v)[c];
        auto drop_zero = [](std::vector<WeightedIndex>& s) {
            s.erase(std::remove_if(s.begin(), s.end(), [](const WeightedIndex& w) { return w.weight == 0; }),
                    s.end());
        };
        drop_zero(pos_support);
        drop_zero(neg_support);
    }
}

Point weighted_sum(std::span<const Point> points, const std::vector<WeightedIndex>& support, std::size_t dimension) {
    Point out(dimension, Rational(0));
    for (const auto& w : support) {
        for (std::size_t i = 0; i < dimension; ++i) out[i] += w.weight * points[w.index][i];
    }
    return out;
}

}  // namespace

HullPair closest_hull_pair(std::span<const Point> positive, std::span<const Point> negative, std::size_t dimension) {
    check_dimension(positive, dimension);
    check_dimension(negative, dimension);
    if (positive.empty() || negative.empty()) {
        throw TeachError(ErrorCode::EmptyClass, "closest_hull_pair needs both classes");
    }
    if (dimension == 0) throw TeachError(ErrorCode::NotSeparable, "all points coincide in dimension 0");

    std::vector<Point> differences;
    differences.reserve(positive.size() * negative.size());
    for (const auto& p : positive)
        for (const auto& n : negative) differences.push_back(p - n);

    MinNormPoint z = min_norm_point(differences);
    if (squared_norm(z.point) == 0) throw TeachError(ErrorCode::NotSeparable, "convex hulls intersect");

    std::map<std::size_t, Rational> pos_weight, neg_weight;
    for (const auto& w : z.weights) {
        pos_weight[w.index / negative.size()] += w.weight;
        neg_weight[w.index % negative.size()] += w.weight;
    }
    HullPair pair;
    for (auto& [i, w] : pos_weight) pair.positive_support.push_back({i, w});
    for (auto& [j, w] : neg_weight) pair.negative_support.push_back({j, w});
    reduce_support(positive, negative, dimension, pair.positive_support, pair.negative_support);

    pair.positive = weighted_sum(positive, pair.positive_support, dimension);
    pair.negative = weighted_sum(negative, pair.negative_support, dimension);
    pair.squared_distance = squared_distance(pair.positive, pair.negative);
    return pair;
}

Hyperplane bisector(const HullPair& pair) {
    Hyperplane h;
    h.weights = pair.positive - pair.negative;
    Point mid_sum(pair.positive.size());
    for (std::size_t i = 0; i < mid_sum.size(); ++i) mid_sum[i] = pair.positive[i] + pair.negative[i];
    h.offset = -dot(h.weights, mid_sum) / 2;
    return h;
}

std::optional<Hyperplane> strict_separability(std::span<const Point> positive, std::span<const Point> negative,
                                              std::size_t dimension) {
    check_dimension(positive, dimension);
    check_dimension(negative, dimension);
    if (negative.empty()) return Hyperplane{Point(dimension, Rational(0)), Rational(1)};
    if (positive.empty()) return Hyperplane{Point(dimension, Rational(0)), Rational(-1)};
    if (dimension == 0) return std::nullopt;
    try {
        return bisector(closest_hull_pair(positive, negative, dimension));
    } catch (const TeachError& e) {
        if (e.code() == ErrorCode::NotSeparable) return std::nullopt;
        throw;
    }
}

SupportSet support_reduction(std::span<const Point> positive, std::span<const Point> negative,
                             std::size_t dimension) {
    HullPair pair = closest_hull_pair(positive, negative, dimension);
    SupportSet out;
    for (const auto& w : pair.positive_support) out.positive.push_back(w.index);
    for (const auto& w : pair.negative_support) out.negative.push_back(w.index);
    return out;
}

}  // namespace teach
