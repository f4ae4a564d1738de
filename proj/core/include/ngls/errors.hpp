#pragma once

#include <stdexcept>
#include <string>

namespace ngls {

/// Invalid user-supplied configuration. `path` points at the offending
/// field ("/symbols/0/lengths") so CLI callers can report it precisely.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A numeric guard tripped: divergent tail exponent, enumeration budget
/// exceeded, horizon too short. Distinct from ConfigError because the
/// input was well-formed; the requested computation is what is infeasible.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ngls
