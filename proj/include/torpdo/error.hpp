#pragma once

#include <stdexcept>
#include <string>

namespace torpdo {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The grid is too coarse for the requested dyadic block, norm, or derivative.
class resolution_error : public error {
public:
    using error::error;
};

/// A symbol's frequency band does not cover what an operation needs.
class band_error : public error {
public:
    using error::error;
};

class not_elliptic_error : public error {
public:
    using error::error;
};

/// Parameters outside the range an operation is defined for.
class domain_error : public error {
public:
    using error::error;
};

} // namespace torpdo
