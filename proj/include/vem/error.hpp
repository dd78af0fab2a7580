#pragma once

#include <stdexcept>
#include <string>

namespace vem {

/// Exception carrying the pipeline stage that raised it ("mesh", "parse",
/// "dofs", "projection", "assembly", "solve", "config", "io").
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace vem
