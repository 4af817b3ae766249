#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadsearch {

enum class Errc {
  MalformedRow,
  UnknownEndpoint,
  NegativeCost,
  MetricViolation,
  InvalidCoordinate,
  EmptyGraph,
  InvalidPath,
  InvalidNode,
  InvalidHeuristic,
  NoPath,
  BrokenChain,
  InvalidSpec,
  DegenerateOutput,
  TooFewNodes,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace roadsearch
