#pragma once

#include <stdexcept>
#include <string>

namespace aqem {

/// Input outside an operation's mathematical domain (bad index, empty sample set, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration value, unknown key, or violated optimizer constraint.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Measurement requested on a state with no photons left.
class StateExhaustedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File-system failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aqem
