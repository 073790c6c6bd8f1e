#pragma once

#include <stdexcept>
#include <string>

namespace satvis {

/// Unknown node, session or other lookup key.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The premise relation of a view contains a cycle. Never raised on graphs
/// produced by build(), which drops cycle-closing edges.
class CycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A layout was abandoned through its stop token.
class CancelledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph document. path() is a JSON pointer to the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace satvis
