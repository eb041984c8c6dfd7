#pragma once

#include <stdexcept>
#include <string>

namespace qmax {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: the caller asked for something outside the model's domain.
class validation_error : public error {
public:
    using error::error;
};

/// A numeric kernel failed on otherwise valid input.
class numeric_error : public error {
public:
    using error::error;
};

class range_error : public validation_error {
public:
    using validation_error::validation_error;
};

class stability_error : public validation_error {
public:
    using validation_error::validation_error;
};

class unsupported_error : public validation_error {
public:
    using validation_error::validation_error;
};

/// Raised only under RangePolicy::strict; the heuristic is asymptotic in k.
class heuristic_range_error : public validation_error {
public:
    using validation_error::validation_error;
};

class convergence_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class singular_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class bracket_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class degenerate_roots_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class degenerate_sample_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

}  // namespace qmax
