#include "tvgs/error.hpp"

namespace tvgs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::ZeroRank: return "zero rank";
    case ErrorKind::UndefinedMetric: return "undefined metric";
    case ErrorKind::Data: return "data error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace tvgs
