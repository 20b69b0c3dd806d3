#pragma once

#include <stdexcept>
#include <string>

namespace fastker {

/// Input data (graph file, partition file, edge list) violates its format.
class MalformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An API was called with arguments that break its precondition.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A checked internal invariant failed; results can no longer be trusted.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The brute-force oracles refuse instances above their size limit.
class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fastker
