#include "rlab/network.hpp"

#include <cmath>
#include <stdexcept>

#include "rlab/rng.hpp"

namespace rlab {

std::vector<BlockView> block_views(ParamBlocks& b) {
  auto view = [](const char* name, Eigen::MatrixXd& m) {
    return BlockView{name, m.data(), m.size(), static_cast<int>(m.rows()),
                     static_cast<int>(m.cols())};
  };
  auto vview = [](const char* name, Eigen::VectorXd& v) {
    return BlockView{name, v.data(), v.size(), static_cast<int>(v.size()), 1};
  };
  return {
      view("layer1.w_input", b.layer1.w_input),
      view("layer1.w_recur", b.layer1.w_recur),
      vview("layer1.bias", b.layer1.bias),
      view("layer2.w_input", b.layer2.w_input),
      view("layer2.w_recur", b.layer2.w_recur),
      vview("layer2.bias", b.layer2.bias),
      view("head.weight", b.head_weight),
      vview("head.bias", b.head_bias),
  };
}

ParamBlocks zeros_like(const ParamBlocks& b) {
  ParamBlocks z;
  z.layer1.w_input = Eigen::MatrixXd::Zero(b.layer1.w_input.rows(), b.layer1.w_input.cols());
  z.layer1.w_recur = Eigen::MatrixXd::Zero(b.layer1.w_recur.rows(), b.layer1.w_recur.cols());
  z.layer1.bias = Eigen::VectorXd::Zero(b.layer1.bias.size());
  z.layer2.w_input = Eigen::MatrixXd::Zero(b.layer2.w_input.rows(), b.layer2.w_input.cols());
  z.layer2.w_recur = Eigen::MatrixXd::Zero(b.layer2.w_recur.rows(), b.layer2.w_recur.cols());
  z.layer2.bias = Eigen::VectorXd::Zero(b.layer2.bias.size());
  z.head_weight = Eigen::MatrixXd::Zero(b.head_weight.rows(), b.head_weight.cols());
  z.head_bias = Eigen::VectorXd::Zero(b.head_bias.size());
  return z;
}

bool all_finite(const ParamBlocks& blocks) {
  ParamBlocks& b = const_cast<ParamBlocks&>(blocks);
  for (const BlockView& v : block_views(b)) {
    for (std::ptrdiff_t i = 0; i < v.size; ++i) {
      if (!std::isfinite(v.data[i])) return false;
    }
  }
  return true;
}

RecurrentState zero_state(const NetworkParams& params) {
  int h = params.hidden_dim;
  return RecurrentState{Eigen::VectorXd::Zero(h), Eigen::VectorXd::Zero(h),
                        Eigen::VectorXd::Zero(h), Eigen::VectorXd::Zero(h)};
}

namespace {

void fill_uniform(Eigen::MatrixXd& m, double bound, Rng& rng) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
}

}  // namespace

NetworkParams init_network(HeadKind head, int input_dim, int hidden_dim, int action_dim,
                           double alpha, std::uint64_t seed) {
  if (input_dim <= 0 || hidden_dim <= 0 || action_dim <= 0) {
    throw std::invalid_argument("init_network: dimensions must be positive");
  }
  NetworkParams p;
  p.head_kind = head;
  p.alpha = alpha;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.action_dim = action_dim;

  Rng rng(derive_seed(seed, seed_stream::kWeightInit));
  const int h4 = 4 * hidden_dim;
  auto make_layer = [&](int in) {
    RecurrentLayerParams layer;
    layer.w_input.resize(h4, in);
    layer.w_recur.resize(h4, hidden_dim);
    layer.bias = Eigen::VectorXd::Zero(h4);
    fill_uniform(layer.w_input, 1.0 / std::sqrt(static_cast<double>(in)), rng);
    fill_uniform(layer.w_recur, 1.0 / std::sqrt(static_cast<double>(hidden_dim)), rng);
    return layer;
  };
  p.blocks.layer1 = make_layer(input_dim);
  p.blocks.layer2 = make_layer(hidden_dim);
  p.blocks.head_weight = Eigen::MatrixXd::Zero(action_dim, hidden_dim);
  p.blocks.head_bias = Eigen::VectorXd::Zero(action_dim);
  return p;
}

void randomize_head(NetworkParams& params, double scale, std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < params.blocks.head_weight.rows(); ++i) {
    for (int j = 0; j < params.blocks.head_weight.cols(); ++j) {
      params.blocks.head_weight(i, j) = rng.uniform(-scale, scale);
    }
  }
  for (int i = 0; i < params.blocks.head_bias.size(); ++i) {
    params.blocks.head_bias[i] = rng.uniform(-scale, scale);
  }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

namespace {

inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) { return 1.0 / (1.0 + (-z).exp()); }

struct LayerOut {
  Eigen::VectorXd i, f, g, o, c, h;
};

LayerOut layer_forward(const RecurrentLayerParams& lp, const Eigen::VectorXd& input,
                       const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
  const int h = static_cast<int>(h_prev.size());
  Eigen::VectorXd z = lp.w_input * input + lp.w_recur * h_prev + lp.bias;
  LayerOut out;
  out.i = sigmoid(z.segment(0, h).array()).matrix();
  out.f = sigmoid(z.segment(h, h).array()).matrix();
  out.g = z.segment(2 * h, h).array().tanh().matrix();
  out.o = sigmoid(z.segment(3 * h, h).array()).matrix();
  out.c = out.f.cwiseProduct(c_prev) + out.i.cwiseProduct(out.g);
  out.h = out.o.cwiseProduct(out.c.array().tanh().matrix());
  return out;
}

}  // namespace

Eigen::VectorXd recurrent_forward(const NetworkParams& params, const Eigen::VectorXd& features,
                                  RecurrentState& state, StepActivations* record,
                                  const char* step_label) {
  if (features.size() != params.input_dim) {
    throw std::invalid_argument("recurrent_forward: feature dimension " +
                                std::to_string(features.size()) + " != input_dim " +
                                std::to_string(params.input_dim));
  }
  LayerOut l1 = layer_forward(params.blocks.layer1, features, state.h1, state.c1);
  LayerOut l2 = layer_forward(params.blocks.layer2, l1.h, state.h2, state.c2);
  Eigen::VectorXd linear = params.blocks.head_weight * l2.h + params.blocks.head_bias;

  Eigen::VectorXd out;
  if (params.head_kind == HeadKind::kStrategySoftmax) {
    out = softmax(linear);
  } else {
    out = (params.alpha * linear.array().tanh()).matrix();
  }
  if (!out.allFinite() || !l2.h.allFinite()) {
    throw std::runtime_error(std::string("recurrent_forward: non-finite activation at ") +
                             step_label);
  }

  if (record) {
    record->input = features;
    record->h1_prev = state.h1;
    record->h2_prev = state.h2;
    record->c1_prev = state.c1;
    record->c2_prev = state.c2;
    record->i1 = l1.i; record->f1 = l1.f; record->g1 = l1.g; record->o1 = l1.o;
    record->c1 = l1.c; record->h1 = l1.h;
    record->i2 = l2.i; record->f2 = l2.f; record->g2 = l2.g; record->o2 = l2.o;
    record->c2 = l2.c; record->h2 = l2.h;
    record->head_linear = linear;
    record->head_out = out;
  }

  state.h1 = l1.h;
  state.c1 = l1.c;
  state.h2 = l2.h;
  state.c2 = l2.c;
  return out;
}

Eigen::VectorXd build_features(const Eigen::VectorXd& last_reward,
                               const Eigen::VectorXd& cumulative_regret, int step,
                               double delta_max, const Eigen::VectorXd& context) {
  const double scale = delta_max > 0 ? delta_max : 1.0;
  const double steps = static_cast<double>(std::max(step, 1));
  Eigen::VectorXd f(last_reward.size() + cumulative_regret.size() + context.size());
  f << last_reward / scale, cumulative_regret / (scale * steps), context;
  return f;
}

}  // namespace rlab
