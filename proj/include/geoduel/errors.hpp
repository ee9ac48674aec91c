#pragma once

#include <stdexcept>
#include <string>

namespace geoduel {

// Error taxonomy shared by all modules. Each failure mode carries a stable
// kind so callers (and the scenario runner) can record it without string
// matching on messages.
enum class ErrorKind {
    SyntaxError,
    UnknownIdentifier,
    DomainError,
    BadPermutation,
    MixedVariance,
    VarianceMismatch,
    SingularMetric,
    NotTorsionFree,
    AsymmetricC,
    DegenerateT,
    NotMetric,
    NotLastPairAntisymmetric,
    DimensionTooSmall,
    WrongSymmetryClass,
    NormalizationError,
    QuadratureUnderflow,
    NonpositiveSigma,
    SchemaError,
    IndexOutOfRange,
    InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace geoduel
