#pragma once

#include <stdexcept>
#include <string>

namespace rabe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed bytes, wrong artifact kind, element not in the group.
struct DecodeError : Error {
    using Error::Error;
};

// Unparseable policy, empty formula, attribute outside the universe.
struct PolicyError : Error {
    using Error::Error;
};

// Contract violations of the scheme algorithms: slot out of range, wrong
// registration list length, capacity exhausted, counter mismatch.
struct SchemeError : Error {
    using Error::Error;
};

// The verifiable tag matched but authenticated decryption of the payload
// failed. This can only happen if the ciphertext blob was corrupted after the
// tag was computed, so it is reported separately from an invalid transform.
struct IntegrityError : Error {
    using Error::Error;
};

}  // namespace rabe
