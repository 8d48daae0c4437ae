#pragma once

#include <stdexcept>
#include <string>

namespace tgif {

// Two failure classes, mirrored by the CLI exit codes: bad inputs (1) and
// everything else that goes wrong at runtime (2).
class Error : public std::runtime_error {
 public:
  enum class Kind { validation, runtime };

  Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw Error(Error::Kind::validation, msg);
}

[[noreturn]] inline void fail_runtime(const std::string& msg) {
  throw Error(Error::Kind::runtime, msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail_validation(msg);
}

}  // namespace tgif
