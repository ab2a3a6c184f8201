#pragma once

#include <stdexcept>
#include <string>

namespace hasard {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientSpace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpisodeFinished : std::logic_error {
  EpisodeFinished() : std::logic_error("step() called on a finished episode; call reset()") {}
};

struct InvalidAction : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceDetected : std::runtime_error {
  DivergenceDetected(int step, const std::string& what)
      : std::runtime_error(what), step(step) {}
  int step;
};

struct NoData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hasard
