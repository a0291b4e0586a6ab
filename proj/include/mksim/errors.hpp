#pragma once

#include <stdexcept>
#include <string>

namespace mksim {

// Base class for simulation, model and snapshot failures.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model configuration failed validation.
class ConfigError : public SimError {
 public:
  using SimError::SimError;
};

// A snapshot could not be parsed or reconstructed.
class SnapshotError : public SimError {
 public:
  using SimError::SimError;
};

// Stored checksum does not match the snapshot contents.
class ChecksumError : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};

// Format or algorithm version mismatch on restore.
class VersionError : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};

// Requested model id is not registered.
class UnknownModelError : public SimError {
 public:
  using SimError::SimError;
};

// Invalid input to a statistical routine (empty sample, rank deficiency, ...).
class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mksim
