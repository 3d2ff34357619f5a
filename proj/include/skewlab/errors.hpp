#ifndef SKEWLAB_ERRORS_HPP
#define SKEWLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skewlab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MixedFields : Error {
    explicit MixedFields(const std::string& msg = "operands belong to different fields") : Error(msg) {}
};
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& msg = "division by zero") : Error(msg) {}
};
struct UnsupportedField : Error {
    explicit UnsupportedField(const std::string& msg) : Error(msg) {}
};
struct MixedAlgebras : Error {
    explicit MixedAlgebras(const std::string& msg = "operands belong to different algebras") : Error(msg) {}
};
struct MixedRings : Error {
    explicit MixedRings(const std::string& msg = "operands belong to different skew rings") : Error(msg) {}
};
struct DivisionByZeroPoly : Error {
    explicit DivisionByZeroPoly(const std::string& msg = "polynomial division by zero") : Error(msg) {}
};
struct NotCentral : Error {
    explicit NotCentral(const std::string& msg) : Error(msg) {}
};
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};
struct Inconclusive : Error {
    explicit Inconclusive(const std::string& msg) : Error(msg) {}
};
struct NotNormalizing : Error {
    explicit NotNormalizing(const std::string& msg) : Error(msg) {}
};
struct NonAbelian : Error {
    explicit NonAbelian(const std::string& msg) : Error(msg) {}
};
struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};
struct RelationViolated : Error {
    explicit RelationViolated(const std::string& msg) : Error(msg) {}
};
struct NotAGrade : Error {
    explicit NotAGrade(const std::string& msg) : Error(msg) {}
};
struct ZeroElement : Error {
    explicit ZeroElement(const std::string& msg = "zero element has no leading component") : Error(msg) {}
};
struct CommutativeFactorizationIncomplete : Error {
    explicit CommutativeFactorizationIncomplete(const std::string& msg) : Error(msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace skewlab

#endif
