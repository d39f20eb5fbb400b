#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stq {

/// Bad dimensions, malformed input, or a violated modelling assumption.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to converge or a matrix was too ill-conditioned.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plant state or a parameter estimate blew past the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, std::size_t agent, const std::string& what)
      : std::runtime_error(what), step_(step), agent_(agent) {}

  std::size_t step() const { return step_; }
  std::size_t agent() const { return agent_; }

 private:
  std::size_t step_;
  std::size_t agent_;
};

/// Policy improvement could not invert the H22 block.
class ImprovementError : public NumericalError {
 public:
  ImprovementError(std::size_t agent, const std::string& what)
      : NumericalError(what), agent_(agent) {}

  std::size_t agent() const { return agent_; }

 private:
  std::size_t agent_;
};

}  // namespace stq
