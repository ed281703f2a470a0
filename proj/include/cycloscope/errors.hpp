#ifndef CYCLOSCOPE_ERRORS_HPP
#define CYCLOSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cycloscope {

// Bad input: wrong modulus, non-prime argument, violated hypothesis. CLI exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is valid but past a configured cap. CLI exit code 3.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation that should always succeed did not (e.g. the randomized
// splitter exhausted its retries).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cycloscope

#endif
