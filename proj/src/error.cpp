#include "issf/error.hpp"

namespace issf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Margin: return "margin error";
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Certificate: return "certificate violation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Numerics: return "numerics error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Range:
    case ErrorKind::Shape:
    case ErrorKind::Margin:
    case ErrorKind::Usage:
      return 2;
    case ErrorKind::Certificate: return 3;
    case ErrorKind::Infeasible: return 4;
    case ErrorKind::Numerics: return 5;
    case ErrorKind::Io: return 1;
  }
  return 1;
}

}  // namespace issf
