#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rlab/unroll.hpp"

namespace rlab {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_block;
  int worst_index = -1;
  std::vector<std::pair<std::string, double>> block_errors;  // per-block max
  /// The trace passed too close to a clamp boundary or the normalization
  /// fallback; finite differences jump there, so the instance is excluded.
  bool nonsmooth = false;
  double loss = 0.0;
};

/// Compares backprop against central finite differences of the replayed loss
/// for every parameter. Intended for small networks (hidden_dim <= 8).
GradCheckResult grad_check(const NetworkParams& params, Kind kind, MetaEnvironment& env,
                           int horizon, double fd_step = 1e-6);

/// Variant over an already-recorded trace.
GradCheckResult grad_check_trace(const UnrollTrace& trace, const NetworkParams& params,
                                 double fd_step = 1e-6);

}  // namespace rlab
