#pragma once

#include <stdexcept>
#include <string>

namespace ordforms {

// Raised for invalid inputs and unmet preconditions anywhere in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ordforms
