#include "oracles.hpp"
#include "support.hpp"

#include "teach/error.hpp"
#include "teach/geometry.hpp"
#include "teach/learners.hpp"

#include <doctest.h>

using namespace teach;
using namespace testing_support;

namespace {

std::vector<LabeledPoint> labeled(std::initializer_list<std::pair<std::initializer_list<long>, int>> list) {
    std::vector<LabeledPoint> out;
    for (auto& [coords, label] : list) out.push_back({pt(coords), label_from_int(label)});
    return out;
}

const Hyperplane& plane_of(const Classifier& c) { return std::get<Classifier::Linear>(c.model()).plane; }

Label constant_label(const Classifier& c) { return std::get<Classifier::Constant>(c.model()).label; }

}  // namespace

TEST_CASE("1NN uses the minimal label among closest points") {
    const Classifier c = train_1nn(1, labeled({{{1}, 0}, {{3}, 1}}));
    CHECK(c.is_one_nn());
    CHECK(c.predict(pt({2})) == Label::zero);
    CHECK(c.predict(pt({3})) == Label::one);

    const Classifier square = train_1nn(2, labeled({{{0, 0}, 0}, {{1, 1}, 0}, {{0, 1}, 1}}));
    CHECK(square.predict(pt({1, 0})) == Label::zero);

    const Classifier zero_dim = train_1nn(0, labeled({{{}, 0}, {{}, 1}}));
    CHECK(zero_dim.is_one_nn());
    CHECK(zero_dim.predict(Point{}) == Label::zero);

    CHECK(constant_label(train_1nn(3, {})) == Label::zero);
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(train_1nn(2, labeled({{{1}, 0}})), TeachError);
    CHECK_THROWS_AS(train_linear(2, labeled({{{1}, 0}})), TeachError);
    const Classifier c = train_1nn(1, labeled({{{1}, 0}}));
    CHECK_THROWS_AS(c.predict(pt({1, 2})), TeachError);
    CHECK(constant_label(train_1nn(1, {})) == Label::zero);
}

TEST_CASE("linear prediction maps the boundary to 0") {
    const Classifier c(Classifier::Linear{Hyperplane{pt({1}), Rational(-5, 2)}});
    CHECK(c.predict(pt({3})) == Label::one);
    CHECK(c.predict(pt({2})) == Label::zero);
    CHECK(c.predict(Point{Rational(5, 2)}) == Label::zero);
    CHECK(Classifier(Classifier::Constant{Label::zero}).predict(pt({9, 9, 9})) == Label::zero);
}

TEST_CASE("train_linear conventions") {
    const Classifier pair = train_linear(1, labeled({{{2}, 0}, {{3}, 1}}));
    REQUIRE(pair.is_linear());
    CHECK(same_hyperplane(plane_of(pair), Hyperplane{pt({1}), Rational(-5, 2)}));
    const std::vector<long> expected{0, 0, 1, 1};
    for (long x = 1; x <= 4; ++x) CHECK(to_int(pair.predict(pt({x}))) == expected[x - 1]);

    CHECK(constant_label(train_linear(2, labeled({{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}}))) ==
          Label::zero);
    CHECK(constant_label(train_linear(1, labeled({{{7}, 1}}))) == Label::one);
    CHECK(constant_label(train_linear(0, labeled({{{}, 1}, {{}, 0}}))) == Label::zero);
    CHECK(constant_label(train_linear(0, labeled({{{}, 1}}))) == Label::one);
    CHECK(constant_label(train_linear(2, {})) == Label::zero);
}

TEST_CASE("strict separability examples") {
    CHECK(strict_separability(pts({{3}, {4}}), pts({{1}, {2}}), 1).has_value());
    CHECK_FALSE(strict_separability(pts({{0, 1}, {1, 0}}), pts({{0, 0}, {1, 1}}), 2).has_value());
    CHECK(strict_separability({}, pts({{7}}), 1).has_value());
    CHECK_FALSE(strict_separability(std::vector<Point>{Point{}}, std::vector<Point>{Point{}}, 0).has_value());
    CHECK(strict_separability(std::vector<Point>{Point{}}, {}, 0).has_value());

    const auto w = strict_separability(pts({{3}, {4}}), pts({{1}, {2}}), 1);
    for (const auto& p : pts({{3}, {4}})) CHECK(w->evaluate(p) > 0);
    for (const auto& n : pts({{1}, {2}})) CHECK(w->evaluate(n) < 0);
}

TEST_CASE("closest hull pair examples") {
    const HullPair a = closest_hull_pair(pts({{3}, {4}}), pts({{1}, {2}}), 1);
    CHECK(a.positive == pt({3}));
    CHECK(a.negative == pt({2}));
    CHECK(a.squared_distance == 1);

    const HullPair b = closest_hull_pair(pts({{0, 2}, {2, 0}}), pts({{0, 0}}), 2);
    CHECK(b.positive == pt({1, 1}));
    CHECK(b.negative == pt({0, 0}));
    CHECK(b.squared_distance == 2);

    const HullPair c = closest_hull_pair(pts({{5}}), pts({{1}}), 1);
    CHECK(c.squared_distance == 16);

    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const TeachError& e) {
            return e.code();
        }
        return ErrorCode::ParseError;
    };
    CHECK(code([] { closest_hull_pair({}, pts({{1}}), 1); }) == ErrorCode::EmptyClass);
    CHECK(code([] { closest_hull_pair(pts({{1}, {3}}), pts({{2}}), 1); }) == ErrorCode::NotSeparable);
}

TEST_CASE("closest hull pair certificates reconstruct the points") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 1 + trial % 3;
        std::vector<Point> pos, neg;
        for (int i = 0; i < 4; ++i) pos.push_back(rng.point(d, 2, 6, 3));
        for (int i = 0; i < 3; ++i) neg.push_back(rng.point(d, -3, 1, 3));
        const HullPair h = closest_hull_pair(pos, neg, d);
        Point p(d), n(d);
        Rational sp = 0, sn = 0;
        for (const auto& [i, w] : h.positive_support) {
            CHECK(w > 0);
            sp += w;
            for (std::size_t c = 0; c < d; ++c) p[c] += w * pos[i][c];
        }
        for (const auto& [j, w] : h.negative_support) {
            CHECK(w > 0);
            sn += w;
            for (std::size_t c = 0; c < d; ++c) n[c] += w * neg[j][c];
        }
        CHECK(sp == 1);
        CHECK(sn == 1);
        CHECK(p == h.positive);
        CHECK(n == h.negative);
        CHECK(h.squared_distance == squared_distance(p, n));
        CHECK(h.positive_support.size() + h.negative_support.size() <= d + 1);
    }
}

TEST_CASE("closest pair and separability agree with support enumeration") {
    Rng rng(2024);
    int separable_seen = 0, inseparable_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + trial % 3;
        const std::size_t np = 1 + rng.below(4), nn = 1 + rng.below(4);
        std::vector<Point> pos, neg;
        for (std::size_t i = 0; i < np; ++i) pos.push_back(rng.point(d, 0, 3, 2));
        for (std::size_t i = 0; i < nn; ++i) neg.push_back(rng.point(d, 0, 3, 2));
        const auto ref = oracle::closest_pair(pos, neg, d);
        REQUIRE(ref.has_value());
        const bool sep = ref->squared_distance > 0;
        CHECK(strict_separability(pos, neg, d).has_value() == sep);
        if (!sep) {
            ++inseparable_seen;
            CHECK_THROWS_AS(closest_hull_pair(pos, neg, d), TeachError);
            continue;
        }
        ++separable_seen;
        const HullPair h = closest_hull_pair(pos, neg, d);
        CHECK(h.squared_distance == ref->squared_distance);
        // The closest pair itself can be non-unique (parallel faces); its difference is not.
        CHECK(h.positive - h.negative == ref->positive - ref->negative);
        CHECK(same_hyperplane(bisector(h), bisector(HullPair{ref->positive, ref->negative, ref->squared_distance, {}, {}})));
    }
    CHECK(separable_seen > 50);
    CHECK(inseparable_seen > 50);
}

TEST_CASE("max-margin hyperplane attains half the hull distance") {
    Rng rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t d = 1 + trial % 2;
        std::vector<LabeledPoint> data;
        std::vector<Point> pos, neg;
        const std::size_t n = 2 + rng.below(7);
        for (std::size_t i = 0; i < n; ++i) {
            LabeledPoint lp{rng.point(d, 0, 4, 2), rng.below(2) ? Label::one : Label::zero};
            (lp.label == Label::one ? pos : neg).push_back(lp.point);
            data.push_back(lp);
        }
        if (pos.empty() || neg.empty() || !oracle::separable(pos, neg, d)) continue;
        const Classifier c = train_linear(d, data);
        REQUIRE(c.is_linear());
        const Hyperplane& h = plane_of(c);
        Rational margin2 = -1;
        for (const auto& lp : data) {
            const Rational v = h.evaluate(lp.point);
            CHECK((v > 0) == (lp.label == Label::one));
            CHECK(v != 0);
            const Rational m = v * v / squared_norm(h.weights);
            if (margin2 < 0 || m < margin2) margin2 = m;
        }
        // The best possible squared margin is (hull distance / 2)^2.
        CHECK(margin2 == oracle::closest_pair(pos, neg, d)->squared_distance / 4);
    }
}

TEST_CASE("support reduction examples") {
    const SupportSet a = support_reduction(pts({{3}, {4}}), pts({{1}, {2}}), 1);
    CHECK(a.positive == std::vector<std::size_t>{0});
    CHECK(a.negative == std::vector<std::size_t>{1});

    const SupportSet b = support_reduction(pts({{0, 2}, {2, 0}, {5, 5}}), pts({{0, 0}}), 2);
    CHECK(b.positive == std::vector<std::size_t>{0, 1});
    CHECK(b.negative == std::vector<std::size_t>{0});

    const SupportSet c = support_reduction(pts({{1}}), pts({{0}}), 1);
    CHECK(c.size() == 2);

    CHECK_THROWS_AS(support_reduction(pts({{1}, {3}}), pts({{2}}), 1), TeachError);
}

TEST_CASE("support reduction retrains to the same hyperplane") {
    Rng rng(71);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + trial % 3;
        std::vector<Point> pos, neg;
        const std::size_t n = 3 + rng.below(8);
        for (std::size_t i = 0; i < n; ++i) (rng.below(2) ? pos : neg).push_back(rng.point(d, 0, 4, 2));
        if (pos.empty() || neg.empty() || !oracle::separable(pos, neg, d)) continue;
        ++checked;
        const SupportSet u = support_reduction(pos, neg, d);
        CHECK(u.size() <= d + 1);
        std::vector<LabeledPoint> all, sub;
        for (const auto& p : pos) all.push_back({p, Label::one});
        for (const auto& q : neg) all.push_back({q, Label::zero});
        for (auto i : u.positive) sub.push_back({pos[i], Label::one});
        for (auto j : u.negative) sub.push_back({neg[j], Label::zero});
        const Classifier full = train_linear(d, all), reduced = train_linear(d, sub);
        REQUIRE(reduced.is_linear());
        CHECK(same_hyperplane(plane_of(full), plane_of(reduced)));
        for (const auto& lp : all) CHECK(reduced.predict(lp.point) == lp.label);
    }
    CHECK(checked > 40);
}

TEST_CASE("1NN prediction matches the definition") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = trial % 3;
        std::vector<LabeledPoint> data;
        for (std::size_t i = 0, n = rng.below(6); i < n; ++i) {
            data.push_back({rng.point(d, 0, 2, 1), rng.below(2) ? Label::one : Label::zero});
        }
        const Classifier c = train_1nn(d, data);
        for (int q = 0; q < 5; ++q) {
            const Point x = rng.point(d, 0, 2, 2);
            CHECK(c.predict(x) == oracle::nn_predict(data, x));
        }
    }
}

TEST_CASE("consistency of both learners") {
    Rng rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t d = 1 + trial % 3;
        std::vector<LabeledPoint> data;
        std::vector<Point> pos, neg;
        for (std::size_t i = 0, n = 1 + rng.below(7); i < n; ++i) {
            LabeledPoint lp{rng.point(d, 0, 2, 1), rng.below(2) ? Label::one : Label::zero};
            (lp.label == Label::one ? pos : neg).push_back(lp.point);
            data.push_back(lp);
        }
        bool collision = false;
        for (const auto& p : pos)
            for (const auto& q : neg) collision = collision || p == q;

        const Classifier nn = train_1nn(d, data);
        bool nn_clean = true;
        for (const auto& lp : data) nn_clean = nn_clean && nn.predict(lp.point) == lp.label;
        CHECK(nn_clean == !collision);
        if (collision) {
            for (const auto& p : pos)
                for (const auto& q : neg)
                    if (p == q) CHECK(nn.predict(p) == Label::zero);
        }

        const Classifier lin = train_linear(d, data);
        bool lin_clean = true;
        for (const auto& lp : data) lin_clean = lin_clean && lin.predict(lp.point) == lp.label;
        CHECK(lin_clean == oracle::separable(pos, neg, d));
    }
}

TEST_CASE("prediction is invariant under positive scaling of the hyperplane") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 3;
        Hyperplane h{rng.point(d, -3, 3, 3), rng.coordinate(-3, 3, 3)};
        if (squared_norm(h.weights) == 0 && h.offset == 0) continue;
        const Rational k = rng.coordinate(1, 5, 7);
        Hyperplane scaled = h;
        for (auto& w : scaled.weights) w *= k;
        scaled.offset *= k;
        CHECK(same_hyperplane(h, scaled));
        const Classifier a(Classifier::Linear{h}), b(Classifier::Linear{scaled});
        for (int q = 0; q < 10; ++q) {
            const Point x = rng.point(d, -3, 3, 2);
            CHECK(a.predict(x) == b.predict(x));
        }
    }
}
