#pragma once

#include <stdexcept>
#include <string>

namespace acbr {

/// Errors caused by bad user input (files, arguments). The CLI maps these to
/// exit code 1; anything else escaping is an internal error.
class input_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class parse_error : public input_error {
  public:
    using input_error::input_error;
};

class format_error : public input_error {
  public:
    using input_error::input_error;
};

class compatibility_error : public input_error {
  public:
    using input_error::input_error;
};

class build_error : public input_error {
  public:
    using input_error::input_error;
};

class io_error : public input_error {
  public:
    using input_error::input_error;
};

/// Vector length mismatch. A programming error rather than bad input.
class dimension_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace acbr
