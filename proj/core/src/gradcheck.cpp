#include "rlab/gradcheck.hpp"

#include <cmath>

namespace rlab {

namespace {

// The clamp [R + p]^+ and its normalization are the only kinks of the
// replayed objective; flag traces that sit within the finite-difference
// footprint of one.
bool near_nonsmooth_point(const UnrollTrace& trace) {
  if (trace.kind == Kind::kNoa || uses_hedge_rule(trace.kind)) return false;
  const double margin = 1e-4;
  for (const auto& learner_steps : trace.steps) {
    for (const UnrollStep& rec : learner_steps) {
      if (rec.xi_norm < margin) return true;
      Eigen::ArrayXd pre = (rec.r_prev + rec.acts.head_out).array().abs();
      if ((pre < margin).any()) return true;
    }
  }
  return false;
}

double rel_error(double a, double b) {
  double denom = std::max(1e-3, std::abs(a) + std::abs(b));
  return std::abs(a - b) / denom;
}

}  // namespace

GradCheckResult grad_check_trace(const UnrollTrace& trace, const NetworkParams& params,
                                 double fd_step) {
  GradCheckResult result;
  result.loss = trace.loss;
  result.nonsmooth = near_nonsmooth_point(trace);

  ParamBlocks analytic = backprop(trace, params);

  NetworkParams probe = params;
  auto probe_views = block_views(probe.blocks);
  auto grad_views = block_views(analytic);

  for (size_t b = 0; b < probe_views.size(); ++b) {
    double block_max = 0.0;
    for (std::ptrdiff_t i = 0; i < probe_views[b].size; ++i) {
      double saved = probe_views[b].data[i];
      probe_views[b].data[i] = saved + fd_step;
      double up = replay_loss(trace, probe);
      probe_views[b].data[i] = saved - fd_step;
      double down = replay_loss(trace, probe);
      probe_views[b].data[i] = saved;

      double fd = (up - down) / (2.0 * fd_step);
      double err = rel_error(grad_views[b].data[i], fd);
      if (err > block_max) block_max = err;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_block = probe_views[b].name;
        result.worst_index = static_cast<int>(i);
      }
    }
    result.block_errors.emplace_back(probe_views[b].name, block_max);
  }
  return result;
}

GradCheckResult grad_check(const NetworkParams& params, Kind kind, MetaEnvironment& env,
                           int horizon, double fd_step) {
  UnrollTrace trace = unroll_and_loss(params, kind, env, horizon);
  return grad_check_trace(trace, params, fd_step);
}

}  // namespace rlab
