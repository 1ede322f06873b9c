#include "enlarge/rational.hpp"

#include "enlarge/error.hpp"

#include <cctype>

namespace enlarge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RefinementBroken: return "REFINEMENT_BROKEN";
        case ErrorCode::BadProbability: return "BAD_PROBABILITY";
        case ErrorCode::BadPartition: return "BAD_PARTITION";
        case ErrorCode::NotAStoppingTime: return "NOT_A_STOPPING_TIME";
        case ErrorCode::NotARandomTime: return "NOT_A_RANDOM_TIME";
        case ErrorCode::NotAdapted: return "NOT_ADAPTED";
        case ErrorCode::NotPredictable: return "NOT_PREDICTABLE";
        case ErrorCode::NotAMartingale: return "NOT_A_MARTINGALE";
        case ErrorCode::NotFMartingale: return "NOT_F_MARTINGALE";
        case ErrorCode::FactorsMissing: return "FACTORS_MISSING";
        case ErrorCode::Unsolvable: return "UNSOLVABLE";
        case ErrorCode::ConnectorInvalid: return "CONNECTOR_INVALID";
        case ErrorCode::SupportConditionFailed: return "SUPPORT_CONDITION_FAILED";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::DataInvariantViolated: return "DATA_INVARIANT_VIOLATED";
        case ErrorCode::ZeroProbabilityBranch: return "ZERO_PROBABILITY_BRANCH";
        case ErrorCode::BadGrid: return "BAD_GRID";
        case ErrorCode::JacodDegenerate: return "JACOD_DEGENERATE";
        case ErrorCode::AzemaDegenerate: return "AZEMA_DEGENERATE";
        case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    }
    return "UNKNOWN";
}

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
        throw Error(ErrorCode::SchemaError, "malformed rational '" + std::string(text) + "'");
    }
    std::string num_s(num);
    if (num_s.front() == '+') num_s.erase(0, 1);
    mpz_class n(num_s, 10);
    mpz_class d{std::string(den), 10};
    if (d == 0) throw Error(ErrorCode::SchemaError, "zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace enlarge
