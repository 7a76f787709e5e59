#pragma once

#include <stdexcept>
#include <string>

namespace seal {

// Rejected input or configuration (bad geometry, unknown parameter, missing table row).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling gave up.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cross-registry backlinks disagree, or a dead id is still referenced.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Snapshot file is truncated, corrupt or from another schema version.
class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seal
