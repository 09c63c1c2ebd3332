#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gramcode {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero in prime field") {}
};

struct InvalidModulus : Error {
    explicit InvalidModulus(const std::string& what) : Error(what) {}
};

struct InvalidPartition : Error {
    explicit InvalidPartition(const std::string& what) : Error(what) {}
};

struct Overflow : Error {
    explicit Overflow(const std::string& what) : Error(what) {}
};

struct FieldTooSmall : Error {
    explicit FieldTooSmall(const std::string& what) : Error(what) {}
};

struct PointSelectionFailed : Error {
    explicit PointSelectionFailed(const std::string& what) : Error(what) {}
};

struct NotEnoughResponses : Error {
    std::size_t missing;
    explicit NotEnoughResponses(std::size_t missing_responses)
        : Error("not enough worker responses; " + std::to_string(missing_responses) + " more needed"),
          missing(missing_responses) {}
};

struct DecodingSingular : Error {
    DecodingSingular() : Error("decoding system is singular; evaluation points were not verified") {}
};

struct UnsupportedCollusion : Error {
    explicit UnsupportedCollusion(std::size_t x)
        : Error("collusion parameter X = " + std::to_string(x) + " is not supported; only X = 1") {}
};

struct NoResponses : Error {
    NoResponses() : Error("all workers dropped; no responses collected") {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& what) : Error(what) {}
};

struct SingularGram : Error {
    SingularGram() : Error("Gram matrix is numerically singular") {}
};

struct InvalidScheme : Error {
    explicit InvalidScheme(const std::string& name) : Error("unknown scheme: " + name) {}
};

struct Truncated : Error {
    explicit Truncated(const std::string& what) : Error(what) {}
};

struct Malformed : Error {
    explicit Malformed(const std::string& what) : Error(what) {}
};

} // namespace gramcode
