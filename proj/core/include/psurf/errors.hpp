#pragma once

#include <stdexcept>
#include <string>

namespace psurf {

/// Failure taxonomy. The first group maps to process exit code 1 (bad
/// input), the second to exit code 2 (numerical failure).
enum class errc {
  data,
  shape,
  size,
  parse,
  io,
  degeneracy,
  conditioning,
  collapse,
  fit,
};

class error : public std::runtime_error {
public:
  error(errc kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case errc::degeneracy:
      case errc::conditioning:
      case errc::collapse:
      case errc::fit:
        return 2;
      default:
        return 1;
    }
  }

private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) {
  throw error(kind, msg);
}

}  // namespace psurf
