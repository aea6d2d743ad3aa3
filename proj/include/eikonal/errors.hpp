#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eikonal {

/// Invalid or incomplete problem/experiment configuration. `path` is a
/// dotted key path into the config document when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string path = {})
      : std::runtime_error(what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace eikonal
