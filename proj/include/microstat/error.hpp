#pragma once

#include <stdexcept>
#include <string>

namespace microstat {

/// Malformed input data: bad file headers, pixel values outside {0,1},
/// dimension/divisibility violations, infeasible generator specs.
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A quantity cannot be normalized, e.g. a descriptor of a single-phase image.
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace microstat
