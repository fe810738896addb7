#ifndef WT_ERRORS_HPP
#define WT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wt {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A position or range lies outside the addressed object.
class index_error : public error {
public:
    using error::error;
};

/// A select ordinal exceeds the number of occurrences.
class not_found_error : public error {
public:
    using error::error;
};

/// Malformed serialized stream or input file.
class format_error : public error {
public:
    using error::error;
};

/// Caller-supplied arguments violate a precondition.
class validation_error : public error {
public:
    using error::error;
};

/// An internal consistency check failed.
class invariant_error : public error {
public:
    using error::error;
};

class arithmetic_error : public error {
public:
    using error::error;
};

} // namespace wt

#endif
