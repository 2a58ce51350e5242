#include "teach/error.hpp"
#include "teach/verifier.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace teach {

std::string_view to_string(LabelMode mode) {
    switch (mode) {
        case LabelMode::separable: return "separable";
        case LabelMode::general: return "general";
        case LabelMode::insufficient: return "insufficient";
    }
    return "?";
}

LabelMode parse_label_mode(std::string_view text) {
    if (text == "separable") return LabelMode::separable;
    if (text == "general") return LabelMode::general;
    if (text == "insufficient") return LabelMode::insufficient;
    throw TeachError(ErrorCode::InvalidParams, "unknown label mode '" + std::string(text) + "'");
}

std::string_view to_string(LatticeKind kind) {
    return kind == LatticeKind::chain ? "chain" : "powerset";
}

LatticeKind parse_lattice_kind(std::string_view text) {
    if (text == "chain") return LatticeKind::chain;
    if (text == "powerset") return LatticeKind::powerset;
    throw TeachError(ErrorCode::InvalidParams, "unknown lattice kind '" + std::string(text) + "'");
}

namespace {

std::string feature_name(std::size_t i) { return "f" + std::to_string(i + 1); }
std::string object_name(std::size_t i) { return "x" + std::to_string(i + 1); }

// Modulo draws on the raw engine output; std distributions are not
// reproducible across standard libraries.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    mpz_class between(const mpz_class& lo, const mpz_class& hi) {
        mpz_class span = hi - lo + 1;
        mpz_class r = mpz_class(std::to_string(engine_())) % span;
        return lo + r;
    }

private:
    std::mt19937_64 engine_;
};

mpz_class ceil_of(const Rational& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

mpz_class floor_of(const Rational& q) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

Rational random_coordinate(Draw& draw, const GeneratorParams& p) {
    for (;;) {
        const std::size_t den = 1 + draw.below(p.max_denominator);
        mpz_class lo = ceil_of(p.coord_low * den), hi = floor_of(p.coord_high * den);
        if (lo > hi) continue;
        Rational r(draw.between(lo, hi), mpz_class(den));
        r.canonicalize();
        return r;
    }
}

std::vector<std::vector<std::string>> make_lattice(std::size_t dimension, LatticeKind kind) {
    std::vector<std::vector<std::string>> lattice;
    if (kind == LatticeKind::chain) {
        for (std::size_t k = 0; k <= dimension; ++k) {
            std::vector<std::string> set;
            for (std::size_t i = 0; i < k; ++i) set.push_back(feature_name(i));
            lattice.push_back(std::move(set));
        }
        return lattice;
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << dimension); ++mask) {
        std::vector<std::string> set;
        for (std::size_t i = 0; i < dimension; ++i)
            if (mask >> i & 1U) set.push_back(feature_name(i));
        lattice.push_back(std::move(set));
    }
    return lattice;
}

RawInstance make_raw(const std::vector<Point>& points, const std::vector<Label>& labels,
                     std::vector<std::vector<std::string>> lattice, std::size_t dimension) {
    RawInstance raw;
    for (std::size_t i = 0; i < points.size(); ++i) raw.objects.push_back({object_name(i), to_int(labels[i])});
    for (std::size_t f = 0; f < dimension; ++f) {
        RawInstance::Feature feature{feature_name(f), {}};
        for (std::size_t i = 0; i < points.size(); ++i) feature.values.emplace(object_name(i), points[i][f]);
        raw.features.push_back(std::move(feature));
    }
    raw.lattice = std::move(lattice);
    return raw;
}

void force_both_labels(Draw& draw, std::vector<Label>& labels) {
    if (labels.size() < 2) return;
    if (std::all_of(labels.begin(), labels.end(), [&](Label l) { return l == labels.front(); })) {
        auto& flip = labels[draw.below(labels.size())];
        flip = flip == Label::zero ? Label::one : Label::zero;
    }
}

bool linearly_separable(const std::vector<Point>& points, const std::vector<Label>& labels, std::size_t dimension) {
    std::vector<Point> positive, negative;
    for (std::size_t i = 0; i < points.size(); ++i) {
        (labels[i] == Label::one ? positive : negative).push_back(points[i]);
    }
    return strict_separability(positive, negative, dimension).has_value();
}

void require_cost(const Instance& inst, const FeatureSet& set, LearnerKind learner, bool concept_cost,
                  std::size_t expected, const std::string& what) {
    auto found = concept_cost ? min_concept_teaching_set(inst, set, learner) : min_invalidation_set(inst, set, learner);
    if (!found || found->size() != expected) {
        throw TeachError(ErrorCode::ConstructionFailed,
                         what + ": expected " + std::to_string(expected) + ", search found " +
                             (found ? std::to_string(found->size()) : std::string("inf")));
    }
}

}  // namespace

Instance generate_random_instance(const GeneratorParams& p) {
    if (p.pool_size < 1) throw TeachError(ErrorCode::InvalidParams, "pool size must be >= 1");
    if (p.max_denominator < 1 || p.max_denominator > 64) {
        throw TeachError(ErrorCode::InvalidParams, "max denominator must be in [1, 64]");
    }
    if (p.coord_low > p.coord_high) throw TeachError(ErrorCode::InvalidParams, "empty coordinate range");
    if (p.mode != LabelMode::general && p.dimension == 0 && p.pool_size >= 2) {
        throw TeachError(ErrorCode::InvalidParams, "dimension 0 cannot separate two labels");
    }

    Draw draw(p.seed);
    const std::size_t n = p.pool_size, d = p.dimension;
    constexpr int attempts = 500;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Point> points(n, Point(d));
        for (auto& pt : points)
            for (auto& c : pt) c = random_coordinate(draw, p);

        std::vector<Label> labels(n, Label::zero);
        if (p.mode == LabelMode::separable) {
            Point w(d);
            for (auto& c : w) c = Rational(static_cast<long>(draw.below(7)) - 3);
            std::set<Rational> projections;
            for (const auto& pt : points) projections.insert(dot(w, pt));
            if (n >= 2 && projections.size() < 2) continue;
            std::vector<Rational> sorted(projections.begin(), projections.end());
            Rational threshold = sorted.front() - 1;
            if (sorted.size() >= 2) {
                const std::size_t k = draw.below(sorted.size() - 1);
                threshold = (sorted[k] + sorted[k + 1]) / 2;
            }
            for (std::size_t i = 0; i < n; ++i) labels[i] = dot(w, points[i]) > threshold ? Label::one : Label::zero;
        } else {
            for (auto& l : labels) l = draw.below(2) ? Label::one : Label::zero;
            force_both_labels(draw, labels);
            if (p.mode == LabelMode::insufficient && linearly_separable(points, labels, d)) continue;
        }
        return validate_instance(make_raw(points, labels, make_lattice(d, p.lattice), d));
    }
    throw TeachError(ErrorCode::ConstructionFailed,
                     "no instance with the requested labeling after " + std::to_string(attempts) + " draws");
}

Instance generate_concept_spec_tightness(std::size_t dimension) {
    if (dimension < 2) {
        throw TeachError(ErrorCode::InvalidParams, "concept tightness needs d >= 2 (THRESH4 covers d = 1)");
    }
    const std::size_t d = dimension;
    std::vector<Point> points{Point(d, Rational(0))};
    std::vector<Label> labels{Label::zero};
    for (std::size_t i = 0; i < d; ++i) {
        Point e(d, Rational(0));
        e[i] = 2;
        points.push_back(std::move(e));
        labels.push_back(Label::one);
    }
    points.emplace_back(d, Rational(2));
    labels.push_back(Label::one);

    Instance inst = validate_instance(make_raw(points, labels, make_lattice(d, LatticeKind::chain), d));
    require_cost(inst, inst.lattice().back(), LearnerKind::linear, true, d + 1, "concept specification cost");
    return inst;
}

Instance generate_invalidation_tightness(std::size_t dimension) {
    if (dimension < 1) throw TeachError(ErrorCode::InvalidParams, "invalidation tightness needs d >= 1");
    const std::size_t d = dimension;
    std::vector<Point> points;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < d + 2; ++i) {
        Point p;
        Rational power = 1;
        for (std::size_t j = 0; j < d; ++j) {
            power *= static_cast<long>(i);
            p.push_back(power);
        }
        points.push_back(std::move(p));
        labels.push_back(i % 2 ? Label::one : Label::zero);
    }
    Instance inst = validate_instance(make_raw(points, labels, make_lattice(d, LatticeKind::chain), d));
    require_cost(inst, inst.lattice().back(), LearnerKind::linear, false, d + 2, "invalidation cost");
    return inst;
}

Instance generate_1nn_explosion(std::size_t k) {
    if (k < 2) throw TeachError(ErrorCode::InvalidParams, "explosion family needs k >= 2");
    std::vector<Point> points;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < k; ++i) {
        points.push_back({Rational(0), Rational(static_cast<long>(2 * i))});
        labels.push_back(Label::zero);
        points.push_back({Rational(1), Rational(static_cast<long>(2 * i + 1))});
        labels.push_back(Label::one);
    }
    Instance inst = validate_instance(make_raw(points, labels, make_lattice(2, LatticeKind::chain), 2));
    require_cost(inst, inst.lattice()[1], LearnerKind::one_nn, true, 2, "1NN concept cost with {f1}");
    require_cost(inst, inst.lattice()[2], LearnerKind::one_nn, true, 2 * k, "1NN concept cost with {f1,f2}");
    return inst;
}

Instance named_instance(std::string_view name) {
    auto build = [](std::vector<std::vector<long>> columns, std::vector<int> labels, LatticeKind kind) {
        std::vector<Point> points(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (const auto& col : columns) points[i].push_back(Rational(col[i]));
        std::vector<Label> ls;
        for (int l : labels) ls.push_back(label_from_int(l));
        return validate_instance(make_raw(points, ls, make_lattice(columns.size(), kind), columns.size()));
    };
    if (name == "thresh4") return build({{1, 2, 3, 4}}, {0, 0, 1, 1}, LatticeKind::chain);
    if (name == "xor4") return build({{0, 0, 1, 1}, {0, 1, 0, 1}}, {0, 1, 1, 0}, LatticeKind::powerset);
    if (name == "coll") return build({{1, 1}}, {0, 1}, LatticeKind::chain);
    if (name == "edf-chain") return build({{1, 2, 3, 4}, {4, 1, 3, 2}}, {0, 0, 1, 1}, LatticeKind::chain);
    throw TeachError(ErrorCode::InvalidParams, "unknown named instance '" + std::string(name) + "'");
}

}  // namespace teach
