#pragma once

#include <stdexcept>
#include <string>

namespace virodyn {

// Error taxonomy; codes mirror vd_status in the public header.
class Error : public std::runtime_error {
public:
  enum class Code {
    Config,
    Numeric,
    Domain,
    InsufficientHistory,
    Io,
    InvalidArgument,
  };

  Error(Code code, const std::string &what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string &w) : Error(Code::Config, w) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string &w) : Error(Code::Numeric, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string &w) : Error(Code::Domain, w) {}
};
struct InsufficientHistoryError : Error {
  explicit InsufficientHistoryError(const std::string &w) : Error(Code::InsufficientHistory, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string &w) : Error(Code::Io, w) {}
};
struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string &w) : Error(Code::InvalidArgument, w) {}
};

} // namespace virodyn
