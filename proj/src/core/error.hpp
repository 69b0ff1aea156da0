#pragma once

#include <stdexcept>
#include <string>

namespace corrgen {

enum class ErrorCode {
  InvalidInput,
  NumericalFailure,
  NotPositiveDefinite,
  NotChordal,
  DegenerateRow,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace corrgen
