#pragma once
#include <stdexcept>
#include <string>

namespace modres {

// Input outside an operation's domain. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A size guard was exceeded (enumeration caps etc.). CLI exit code 3.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed graph text. A kind of input error; message names the line.
struct ParseError : InputError {
    using InputError::InputError;
};

}  // namespace modres
