#pragma once

#include <cstdint>
#include <string>

#include "rlab/network.hpp"

namespace rlab {

/// Metadata stored beside the weights; enough to rebuild the minimizer the
/// checkpoint was trained as.
struct CheckpointMeta {
  std::string algorithm;     // e.g. "nprm"
  std::string distribution;  // training distribution id
  int train_horizon = 0;
  double delta_max = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
};

struct Checkpoint {
  NetworkParams params;
  CheckpointMeta meta;
};

/// Binary container, little-endian regardless of host: magic, format version,
/// metadata, then each weight tensor as a named array of 64-bit floats with a
/// declared row-major shape. Round-trips are bit-exact.
void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const CheckpointMeta& meta);

/// Throws std::runtime_error on bad magic, unsupported version, or any
/// mismatch between the declared dimensions and the stored tensor shapes.
Checkpoint load_checkpoint(const std::string& path);

/// FNV-1a 64-bit, used to fingerprint resolved configuration text.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace rlab
