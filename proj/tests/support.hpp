#pragma once

#include "teach/instance.hpp"
#include "teach/learners.hpp"
#include "teach/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using teach::Label;
using teach::Point;
using teach::Rational;

inline Point pt(std::initializer_list<long> coords) {
    Point p;
    for (long c : coords) p.emplace_back(c);
    return p;
}

inline std::vector<Point> pts(std::initializer_list<std::initializer_list<long>> list) {
    std::vector<Point> out;
    for (auto c : list) out.push_back(pt(c));
    return out;
}

inline teach::Instance from_text(const std::string& text) { return teach::instance_from_json(nlohmann::json::parse(text)); }

inline const char* kThresh4 = R"({
  "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 0}, {"id": "x3", "label": 1}, {"id": "x4", "label": 1}],
  "features": [{"id": "f1", "values": {"x1": "1", "x2": "2", "x3": "3", "x4": "4"}}],
  "lattice": [[], ["f1"]]
})";

inline const char* kXor4 = R"({
  "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 1}, {"id": "x3", "label": 1}, {"id": "x4", "label": 0}],
  "features": [{"id": "f1", "values": {"x1": "0", "x2": "0", "x3": "1", "x4": "1"}},
               {"id": "f2", "values": {"x1": "0", "x2": "1", "x3": "0", "x4": "1"}}],
  "lattice": [[], ["f1"], ["f2"], ["f1", "f2"]]
})";

inline const char* kColl = R"({
  "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 1}],
  "features": [{"id": "f1", "values": {"x1": "1", "x2": "1"}}],
  "lattice": [[], ["f1"]]
})";

// Test-side generator: raw engine output modulo n, independent of the library's.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
    Rational coordinate(long lo, long hi, long max_den) {
        const long den = between(1, max_den);
        Rational r(between(lo * den, hi * den), den);
        r.canonicalize();
        return r;
    }
    Point point(std::size_t d, long lo, long hi, long max_den) {
        Point p;
        for (std::size_t i = 0; i < d; ++i) p.push_back(coordinate(lo, hi, max_den));
        return p;
    }

private:
    std::mt19937_64 engine_;
};

// Random instance document with a power-set lattice over d features.
inline nlohmann::json random_document(Rng& rng, std::size_t d, std::size_t n, long lo = 0, long hi = 3,
                                      long max_den = 1) {
    nlohmann::json doc;
    doc["objects"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        doc["objects"].push_back({{"id", "x" + std::to_string(i + 1)}, {"label", rng.below(2)}});
    }
    doc["features"] = nlohmann::json::array();
    for (std::size_t f = 0; f < d; ++f) {
        nlohmann::json values;
        for (std::size_t i = 0; i < n; ++i) {
            values["x" + std::to_string(i + 1)] = rng.coordinate(lo, hi, max_den).get_str();
        }
        doc["features"].push_back({{"id", "f" + std::to_string(f + 1)}, {"values", values}});
    }
    doc["lattice"] = nlohmann::json::array();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        nlohmann::json set = nlohmann::json::array();
        for (std::size_t f = 0; f < d; ++f)
            if (mask >> f & 1U) set.push_back("f" + std::to_string(f + 1));
        doc["lattice"].push_back(set);
    }
    return doc;
}

}  // namespace testing_support
