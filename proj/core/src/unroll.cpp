#include "rlab/unroll.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab {

double prediction_bound(double delta_max, double alpha, int num_actions, int t) {
  return std::sqrt(2.0) *
         std::sqrt((2.0 * delta_max + alpha) * static_cast<double>(num_actions) *
                   static_cast<double>(t));
}

namespace {

void check_neural_kind(Kind kind, const NetworkParams& params) {
  if (!is_neural(kind)) throw std::invalid_argument("unroll: non-neural algorithm kind");
  bool wants_softmax = kind == Kind::kNoa;
  if (wants_softmax != (params.head_kind == HeadKind::kStrategySoftmax)) {
    throw std::invalid_argument("unroll: head kind does not match algorithm");
  }
}

Eigen::VectorXd strategy_for_step(Kind kind, const Eigen::VectorXd& head_out,
                                  const Eigen::VectorXd& r_prev, double beta,
                                  UnrollStep* rec) {
  if (kind == Kind::kNoa) return head_out;
  StrategyVector sigma = strategy_from(r_prev, head_out, uses_hedge_rule(kind), beta);
  if (rec && !uses_hedge_rule(kind)) {
    rec->xi = (r_prev + head_out).cwiseMax(0.0);
    rec->xi_norm = rec->xi.sum();
  }
  return sigma.probs;
}

}  // namespace

UnrollTrace unroll_and_loss(const NetworkParams& params, Kind kind, MetaEnvironment& env,
                            int horizon, int hedge_horizon) {
  check_neural_kind(kind, params);
  if (horizon < 1) throw std::invalid_argument("unroll: horizon must be >= 1");

  const int learners = env.num_learners();
  const int actions = env.num_actions();
  const Aggregation mode = aggregation_of(kind);

  UnrollTrace trace;
  trace.kind = kind;
  trace.horizon = horizon;
  trace.num_learners = learners;
  trace.num_actions = actions;
  trace.delta_max = env.delta_max();
  trace.alpha = params.alpha;
  trace.weights = env.learner_weights();
  if (uses_hedge_rule(kind)) {
    trace.beta = hedge_beta(actions, hedge_horizon > 0 ? hedge_horizon : horizon);
  }
  trace.steps.assign(learners, std::vector<UnrollStep>(horizon));
  trace.learner_regret.assign(learners, 0.0);

  std::vector<RecurrentState> hidden(learners);
  std::vector<Eigen::VectorXd> r_state(learners, Eigen::VectorXd::Zero(actions));
  std::vector<Eigen::VectorXd> r_full(learners, Eigen::VectorXd::Zero(actions));
  std::vector<StepActivations> pending(learners);

  for (int l = 0; l < learners; ++l) {
    hidden[l] = zero_state(params);
    Eigen::VectorXd f = build_features(Eigen::VectorXd::Zero(actions),
                                       Eigen::VectorXd::Zero(actions), 0, trace.delta_max,
                                       env.context(l));
    recurrent_forward(params, f, hidden[l], &pending[l], "unroll init");
  }

  std::vector<StrategyVector> sigmas(learners);
  for (int t = 1; t <= horizon; ++t) {
    for (int l = 0; l < learners; ++l) {
      UnrollStep& rec = trace.steps[l][t - 1];
      rec.acts = std::move(pending[l]);
      rec.r_prev = r_state[l];
      Eigen::VectorXd sigma =
          strategy_for_step(kind, rec.acts.head_out, rec.r_prev, trace.beta, &rec);
      rec.strategy = sigma;
      sigmas[l] = StrategyVector{std::move(sigma)};
    }
    std::vector<RewardVector> rewards = env.step(sigmas);
    if (static_cast<int>(rewards.size()) != learners) {
      throw std::runtime_error("unroll: environment returned wrong learner count");
    }
    for (int l = 0; l < learners; ++l) {
      UnrollStep& rec = trace.steps[l][t - 1];
      rec.reward = rewards[l].values;
      if (!rec.reward.allFinite()) {
        throw std::runtime_error("unroll: non-finite reward at step " + std::to_string(t));
      }
      Eigen::VectorXd r = (rec.reward.array() - rec.strategy.dot(rec.reward)).matrix();
      r_full[l] += r;
      r_state[l] += r;
      if (mode == Aggregation::kPositivePart) r_state[l] = r_state[l].cwiseMax(0.0);

      if ((kind == Kind::kNprm || kind == Kind::kNprmPlus) &&
          r_full[l].maxCoeff() >
              prediction_bound(trace.delta_max, params.alpha, actions, t) + 1e-9) {
        trace.bound_violated = true;
      }

      if (t < horizon) {
        Eigen::VectorXd f = build_features(rec.reward, r_state[l], t, trace.delta_max,
                                           env.context(l));
        recurrent_forward(params, f, hidden[l], &pending[l],
                          ("unroll step " + std::to_string(t)).c_str());
      }
    }
  }

  trace.loss = 0.0;
  for (int l = 0; l < learners; ++l) {
    trace.learner_regret[l] = r_full[l].maxCoeff();
    trace.loss += trace.weights[l] * trace.learner_regret[l];
  }
  if (!std::isfinite(trace.loss)) throw std::runtime_error("unroll: non-finite loss");
  return trace;
}

namespace {

inline Eigen::VectorXd softmax_backward(const Eigen::VectorXd& probs,
                                        const Eigen::VectorXd& dprobs) {
  double mixed = probs.dot(dprobs);
  return probs.cwiseProduct((dprobs.array() - mixed).matrix());
}

struct LayerGradRefs {
  Eigen::MatrixXd& w_input;
  Eigen::MatrixXd& w_recur;
  Eigen::VectorXd& bias;
};

// Returns the gradient with respect to the layer input; accumulates weight
// gradients; updates dh/dc to the values flowing into the previous step.
Eigen::VectorXd layer_backward(const RecurrentLayerParams& lp, const Eigen::VectorXd& input,
                               const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                               const Eigen::VectorXd& i, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& g, const Eigen::VectorXd& o,
                               const Eigen::VectorXd& c, Eigen::VectorXd& dh,
                               Eigen::VectorXd& dc, LayerGradRefs grad) {
  const int h = static_cast<int>(h_prev.size());
  Eigen::ArrayXd tanh_c = c.array().tanh();
  Eigen::ArrayXd d_out = dh.array() * tanh_c;
  Eigen::ArrayXd dc_total = dc.array() + dh.array() * o.array() * (1.0 - tanh_c.square());

  Eigen::VectorXd dz(4 * h);
  dz.segment(0, h) = ((dc_total * g.array()) * i.array() * (1.0 - i.array())).matrix();
  dz.segment(h, h) = ((dc_total * c_prev.array()) * f.array() * (1.0 - f.array())).matrix();
  dz.segment(2 * h, h) = ((dc_total * i.array()) * (1.0 - g.array().square())).matrix();
  dz.segment(3 * h, h) = (d_out * o.array() * (1.0 - o.array())).matrix();

  grad.w_input.noalias() += dz * input.transpose();
  grad.w_recur.noalias() += dz * h_prev.transpose();
  grad.bias += dz;

  dh = lp.w_recur.transpose() * dz;
  dc = (dc_total * f.array()).matrix();
  return lp.w_input.transpose() * dz;
}

}  // namespace

ParamBlocks backprop(const UnrollTrace& trace, const NetworkParams& params) {
  check_neural_kind(trace.kind, params);
  if (trace.num_learners == 0 || trace.steps.empty()) {
    throw std::invalid_argument("backprop: empty trace");
  }
  if (static_cast<int>(trace.steps[0][0].acts.input.size()) != params.input_dim) {
    throw std::invalid_argument("backprop: trace/params dimension mismatch");
  }

  ParamBlocks grads = zeros_like(params.blocks);
  LayerGradRefs g1{grads.layer1.w_input, grads.layer1.w_recur, grads.layer1.bias};
  LayerGradRefs g2{grads.layer2.w_input, grads.layer2.w_recur, grads.layer2.bias};

  for (int l = 0; l < trace.num_learners; ++l) {
    const double w = trace.weights[l];
    Eigen::VectorXd dh1 = Eigen::VectorXd::Zero(params.hidden_dim);
    Eigen::VectorXd dc1 = Eigen::VectorXd::Zero(params.hidden_dim);
    Eigen::VectorXd dh2 = Eigen::VectorXd::Zero(params.hidden_dim);
    Eigen::VectorXd dc2 = Eigen::VectorXd::Zero(params.hidden_dim);

    for (int t = trace.horizon; t >= 1; --t) {
      const UnrollStep& rec = trace.steps[l][t - 1];
      Eigen::VectorXd dsigma = -w * rec.reward;

      Eigen::VectorXd dy;
      if (trace.kind == Kind::kNoa) {
        dy = softmax_backward(rec.acts.head_out, dsigma);
      } else {
        Eigen::VectorXd dp;
        if (uses_hedge_rule(trace.kind)) {
          dp = trace.beta * softmax_backward(rec.strategy, dsigma);
        } else if (rec.xi_norm > 0) {
          double mixed = dsigma.dot(rec.strategy);
          Eigen::ArrayXd dxi = (dsigma.array() - mixed) / rec.xi_norm;
          dp = (dxi * (rec.xi.array() > 0).cast<double>()).matrix();
        } else {
          dp = Eigen::VectorXd::Zero(trace.num_actions);  // uniform fallback
        }
        // p = alpha * tanh(y): dy = dp * alpha * (1 - tanh(y)^2).
        Eigen::ArrayXd tanh_y = rec.acts.head_out.array() / params.alpha;
        dy = (dp.array() * params.alpha * (1.0 - tanh_y.square())).matrix();
      }

      grads.head_weight.noalias() += dy * rec.acts.h2.transpose();
      grads.head_bias += dy;
      Eigen::VectorXd dh2_cur = params.blocks.head_weight.transpose() * dy + dh2;

      dh2 = dh2_cur;  // layer_backward consumes and rewrites dh2/dc2
      Eigen::VectorXd dx2 =
          layer_backward(params.blocks.layer2, rec.acts.h1, rec.acts.h2_prev, rec.acts.c2_prev,
                         rec.acts.i2, rec.acts.f2, rec.acts.g2, rec.acts.o2, rec.acts.c2, dh2,
                         dc2, g2);

      Eigen::VectorXd dh1_cur = dx2 + dh1;
      dh1 = dh1_cur;
      layer_backward(params.blocks.layer1, rec.acts.input, rec.acts.h1_prev, rec.acts.c1_prev,
                     rec.acts.i1, rec.acts.f1, rec.acts.g1, rec.acts.o1, rec.acts.c1, dh1, dc1,
                     g1);
      // The features entering layer 1 carry no gradient.
    }
  }
  return grads;
}

double replay_loss(const UnrollTrace& trace, const NetworkParams& params) {
  check_neural_kind(trace.kind, params);
  double loss = 0.0;
  for (int l = 0; l < trace.num_learners; ++l) {
    RecurrentState hidden = zero_state(params);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(trace.num_actions);
    for (int t = 1; t <= trace.horizon; ++t) {
      const UnrollStep& rec = trace.steps[l][t - 1];
      Eigen::VectorXd out = recurrent_forward(params, rec.acts.input, hidden, nullptr, "replay");
      Eigen::VectorXd sigma =
          strategy_for_step(trace.kind, out, rec.r_prev, trace.beta, nullptr);
      total += (rec.reward.array() - sigma.dot(rec.reward)).matrix();
    }
    loss += trace.weights[l] * total.maxCoeff();
  }
  return loss;
}

}  // namespace rlab
