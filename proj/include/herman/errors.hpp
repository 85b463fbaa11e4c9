#ifndef HERMAN_ERRORS_HPP
#define HERMAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace herman {

// Exit codes used by the CLI: 0 ok, 2 config error, 3 data error, 4 numeric failure.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace herman

#endif
