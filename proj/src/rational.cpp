#include "teach/rational.hpp"

#include "teach/error.hpp"

#include <cctype>
#include <sstream>

namespace teach {

namespace {

bool is_integer_text(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view s) {
    std::string digits(s);
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den) || den.front() == '-' || den.front() == '+') {
        throw TeachError(ErrorCode::InvalidRational, "malformed rational '" + std::string(text) + "'");
    }
    mpz_class d = parse_integer(den);
    if (d == 0) {
        throw TeachError(ErrorCode::InvalidRational, "zero denominator in '" + std::string(text) + "'");
    }
    Rational r(parse_integer(num), d);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& value) {
    return value.get_str(10);
}

Rational dot(const Point& a, const Point& b) {
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Rational squared_norm(const Point& a) {
    return dot(a, a);
}

Rational squared_distance(const Point& a, const Point& b) {
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

Point operator-(const Point& a, const Point& b) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

std::string format_point(const Point& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ',';
        os << format_rational(p[i]);
    }
    os << ')';
    return os.str();
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidRational: return "InvalidRational";
        case ErrorCode::InvalidLabel: return "InvalidLabel";
        case ErrorCode::MissingFeatureValue: return "MissingFeatureValue";
        case ErrorCode::DuplicateObjectId: return "DuplicateObjectId";
        case ErrorCode::LatticeChainViolation: return "LatticeChainViolation";
        case ErrorCode::UnknownFeatureId: return "UnknownFeatureId";
        case ErrorCode::UnknownObject: return "UnknownObject";
        case ErrorCode::UnknownFeature: return "UnknownFeature";
        case ErrorCode::FeatureSetNotInLattice: return "FeatureSetNotInLattice";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotSeparable: return "NotSeparable";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::IllegalAction: return "IllegalAction";
        case ErrorCode::Stuck: return "Stuck";
        case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    }
    return "Unknown";
}

}  // namespace teach
