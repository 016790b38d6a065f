#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gsub {

// Error code strings are part of the tool's contract; the CLI maps them to
// exit status 1 and tests match on them.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace gsub
