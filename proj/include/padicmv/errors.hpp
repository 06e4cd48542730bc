#pragma once

#include <stdexcept>
#include <string>

namespace padicmv {

/// Malformed or out-of-contract input (bad prime, non-integral sigma*K,
/// reducible minimal polynomial, unparsable text, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The prime is valid but not supported by the requested operation
/// (e.g. p != 1 mod 4 for square roots of -1).
class UnsupportedPrime : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A configured enumeration or work budget would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace padicmv
