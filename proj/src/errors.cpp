#include "pcula/errors.hpp"

namespace pcula {

DimensionMismatch::DimensionMismatch(const std::string& where, long expected,
                                     long got)
    : InvalidArgument(where + ": dimension mismatch (expected " +
                      std::to_string(expected) + ", got " +
                      std::to_string(got) + ")") {}

DivergenceError::DivergenceError(std::uint64_t step)
    : Error("chain diverged: non-finite position at step " +
            std::to_string(step)),
      step_(step) {}

namespace {
std::string join_messages(const std::vector<std::string>& messages) {
  std::string out = "invalid configuration";
  for (const auto& m : messages) out += "\n  " + m;
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : Error(join_messages(messages)), messages_(std::move(messages)) {}

}  // namespace pcula
