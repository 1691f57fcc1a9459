#pragma once

#include <stdexcept>
#include <string>

namespace textforge {

// Base class for everything thrown by the library.
class error : public std::runtime_error {
  public:
    explicit error(const std::string & what) : std::runtime_error(what) {}
};

// Degenerate image dimensions, inverted or out-of-range rectangles.
class invalid_geometry_error : public error {
  public:
    explicit invalid_geometry_error(const std::string & what) : error(what) {}
};

// Span text that cannot be expressed in the quoted notation.
class unserializable_text_error : public error {
  public:
    explicit unserializable_text_error(const std::string & what) : error(what) {}
};

// Malformed input files or records (CLI exit code 2).
class input_error : public error {
  public:
    explicit input_error(const std::string & what) : error(what) {}
};

// Bad flags, config files, or missing credentials (CLI exit code 1).
class config_error : public error {
  public:
    explicit config_error(const std::string & what) : error(what) {}
};

// Chat-completion service failures (CLI exit code 3). Only transient ones
// (connection failures, 429, 5xx) are worth retrying.
class transport_error : public error {
  public:
    explicit transport_error(const std::string & what, bool retryable = true)
        : error(what), retryable_(retryable) {}

    bool retryable() const { return retryable_; }

  private:
    bool retryable_;
};

} // namespace textforge
