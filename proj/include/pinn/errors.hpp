#pragma once
/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every pinn module.
 *
 * The CLI maps these onto exit codes: ConfigError/ArgumentError -> 2,
 * ParseError/IoError -> 3, everything else -> 1.
 */

#include <stdexcept>
#include <string>

namespace pinn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite numeric input where a finite value is required.
struct DomainError : Error {
  using Error::Error;
};

/// Malformed architecture, training configuration or hyperparameter.
struct ConfigError : Error {
  using Error::Error;
};

/// Index out of range, shape mismatch, empty input.
struct ArgumentError : Error {
  using Error::Error;
};

/// Malformed checkpoint or other input file. The message carries the field path.
struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

/// Loss became non-finite during training.
struct DivergenceError : Error {
  DivergenceError(int epoch, const std::string& what)
      : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace pinn
