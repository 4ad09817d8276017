#pragma once

#include <stdexcept>
#include <string>

namespace matchpoly {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (graph files, rational literals, gadget records).
struct ParseError : Error {
    ParseError(const std::string& msg, int line_number = -1)
        : Error(line_number >= 0 ? "line " + std::to_string(line_number) + ": " + msg : msg),
          line(line_number) {}
    int line;
};

// Precondition violations and out-of-domain arguments.
struct DomainError : Error {
    using Error::Error;
};

// A ratio against a vanishing partition function. Kept distinct so callers
// can route around zeros instead of treating them as generic failures.
struct ZeroPartitionError : Error {
    using Error::Error;
};

// Vanishing denominator while evaluating a tree recurrence.
struct VanishingDenominatorError : Error {
    VanishingDenominatorError(const std::string& msg, int node_id)
        : Error(msg + " (node " + std::to_string(node_id) + ")"), node(node_id) {}
    int node;
};

// A size/iteration cap was hit before the computation finished.
struct CapExceededError : Error {
    CapExceededError(const std::string& msg, long reached_value)
        : Error(msg), reached(reached_value) {}
    long reached;
};

}  // namespace matchpoly
