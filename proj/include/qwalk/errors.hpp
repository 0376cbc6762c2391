#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Coin construction / validation.
struct NonUnitary : Error {
    explicit NonUnitary(const std::string& what) : Error(what) {}
};
struct ForbiddenDiagonal : Error {
    explicit ForbiddenDiagonal(const std::string& what) : Error(what) {}
};
struct BadDimension : Error {
    explicit BadDimension(const std::string& what) : Error(what) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};
struct DegenerateTheta : Error {
    explicit DegenerateTheta(const std::string& what) : Error(what) {}
};

// Transfer-engine failure modes.
struct InteriorSingular : Error {
    explicit InteriorSingular(const std::string& what) : Error(what) {}
};
struct AZero : Error {
    explicit AZero(const std::string& what) : Error(what) {}
};
struct AssumptionViolated : Error {
    explicit AssumptionViolated(const std::string& what) : Error(what) {}
};
struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& what) : Error(what) {}
};
struct ZeroVector : Error {
    explicit ZeroVector(const std::string& what) : Error(what) {}
};

// Config-file problems (CLI maps these to its own exit code, separate from
// model validation failures).
struct ConfigParse : Error {
    explicit ConfigParse(const std::string& what) : Error(what) {}
};

}  // namespace qwalk
