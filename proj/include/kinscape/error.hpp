#pragma once

#include <stdexcept>
#include <string>

namespace kinscape {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The unitary is not e^{i phi} D(alpha, beta, gamma) for any Euler triple.
class NotInR : public Error {
public:
    using Error::Error;
};

// Projector list fails idempotence, orthogonality or completeness.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace kinscape
