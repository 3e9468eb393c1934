#pragma once

#include "rlab/network.hpp"

namespace rlab {

/// First/second moment accumulators shaped like the parameters.
struct AdamState {
  ParamBlocks m;
  ParamBlocks v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState init(const ParamBlocks& like) {
    return AdamState{zeros_like(like), zeros_like(like), 0, 0.9, 0.999, 1e-8};
  }
};

/// Standard bias-corrected Adam update, in place. Rejects non-finite
/// gradients.
void adam_step(ParamBlocks& params, const ParamBlocks& grads, AdamState& opt, double lr);

/// lr_end + (lr_start - lr_end) * (1 + cos(pi * step / total)) / 2.
double cosine_lr(int step, int total_steps, double lr_start, double lr_end);

}  // namespace rlab
