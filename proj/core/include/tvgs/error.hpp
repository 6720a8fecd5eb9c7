#pragma once

#include <stdexcept>
#include <string>

namespace tvgs {

enum class ErrorKind {
  InvalidInput,    // argument violates a documented precondition
  OutOfRange,      // index outside the matrix / operator dimensions
  ZeroRank,        // SVD-derived quantity requested for an all-zero matrix
  UndefinedMetric, // metric with a zero reference (e.g. NRMSE against 0)
  Data,            // malformed or inconsistent file contents
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace tvgs
