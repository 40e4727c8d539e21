#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cubicvm {

// parameter outside the accepted tau range, or a point outside an operation's domain
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::range_error {
    using std::range_error::range_error;
};

struct ContinuationError : std::runtime_error {
    std::size_t index;
    ContinuationError(const std::string& what, std::size_t idx)
        : std::runtime_error(what), index(idx) {}
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// two point charges of interacting components share a position
struct InfiniteEnergyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cubicvm
