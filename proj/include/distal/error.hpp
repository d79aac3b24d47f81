#pragma once

#include <stdexcept>
#include <string>

namespace distal {

// Every failure carries a module-qualified code such as "torus.rational_angle"
// so the CLI can report it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace distal
