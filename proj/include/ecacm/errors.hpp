#pragma once

#include <stdexcept>
#include <string>

namespace ecacm {

// Argument outside an operation's domain (bad rule number, window longer
// than the row, malformed probability vector). Maps to ECACM_ERR_DOMAIN.
using DomainError = std::domain_error;

// Iterative numerics failed to converge or produced out-of-range values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A requested size cannot be allocated or addressed.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be opened or written; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal consistency violation between cooperating structures.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ecacm
