#include "rlab/adam.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rlab {

void adam_step(ParamBlocks& params, const ParamBlocks& grads, AdamState& opt, double lr) {
  if (!all_finite(grads)) throw std::invalid_argument("adam_step: non-finite gradient");

  opt.step += 1;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));

  auto pv = block_views(params);
  auto gv = block_views(const_cast<ParamBlocks&>(grads));
  auto mv = block_views(opt.m);
  auto vv = block_views(opt.v);
  for (size_t b = 0; b < pv.size(); ++b) {
    if (pv[b].size != gv[b].size) throw std::invalid_argument("adam_step: shape mismatch");
    for (std::ptrdiff_t i = 0; i < pv[b].size; ++i) {
      double g = gv[b].data[i];
      double& m = mv[b].data[i];
      double& v = vv[b].data[i];
      m = opt.beta1 * m + (1.0 - opt.beta1) * g;
      v = opt.beta2 * v + (1.0 - opt.beta2) * g * g;
      double m_hat = m / bc1;
      double v_hat = v / bc2;
      pv[b].data[i] -= lr * m_hat / (std::sqrt(v_hat) + opt.epsilon);
    }
  }
}

double cosine_lr(int step, int total_steps, double lr_start, double lr_end) {
  if (total_steps <= 0) return lr_end;
  if (step < 0) step = 0;
  if (step > total_steps) step = total_steps;
  double phase = std::numbers::pi * static_cast<double>(step) / static_cast<double>(total_steps);
  return lr_end + 0.5 * (lr_start - lr_end) * (1.0 + std::cos(phase));
}

}  // namespace rlab
