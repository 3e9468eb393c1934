#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rlab {

/// Network output head. Strategy heads emit a simplex point via softmax;
/// prediction heads emit a regret estimate squashed into [-alpha, alpha]
/// by alpha * tanh.
enum class HeadKind { kStrategySoftmax, kPredictionBounded };

/// One gated recurrent layer. Rows of the weight matrices are packed in gate
/// order input, forget, cell candidate, output (4H rows total).
struct RecurrentLayerParams {
  Eigen::MatrixXd w_input;  // (4H, in)
  Eigen::MatrixXd w_recur;  // (4H, H)
  Eigen::VectorXd bias;     // (4H)
};

/// All trainable tensors, without the metadata. Gradients and optimizer
/// moments reuse this shape.
struct ParamBlocks {
  RecurrentLayerParams layer1;
  RecurrentLayerParams layer2;
  Eigen::MatrixXd head_weight;  // (A, H)
  Eigen::VectorXd head_bias;    // (A)
};

/// Named flat view over one tensor of a ParamBlocks, for the optimizer,
/// checkpoints and gradient checking. Data is the tensor's storage order.
struct BlockView {
  std::string name;
  double* data;
  std::ptrdiff_t size;
  int rows;
  int cols;
};

std::vector<BlockView> block_views(ParamBlocks& blocks);
ParamBlocks zeros_like(const ParamBlocks& blocks);
bool all_finite(const ParamBlocks& blocks);

/// Two stacked recurrent layers plus a dense head.
struct NetworkParams {
  ParamBlocks blocks;
  HeadKind head_kind = HeadKind::kPredictionBounded;
  double alpha = 0.0;  // prediction head output scale; >= 2 * delta_max
  int input_dim = 0;
  int hidden_dim = 0;
  int action_dim = 0;
};

/// Hidden and cell vectors for both layers; zero at episode start.
struct RecurrentState {
  Eigen::VectorXd h1, c1, h2, c2;
};

RecurrentState zero_state(const NetworkParams& params);

/// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero, and the
/// head zeroed so an untrained prediction head outputs exactly 0 and an
/// untrained strategy head outputs exactly the uniform strategy.
NetworkParams init_network(HeadKind head, int input_dim, int hidden_dim, int action_dim,
                           double alpha, std::uint64_t seed);

/// Overwrites the head with uniform random weights in [-scale, scale].
/// Gradient checking uses this: the zeroed head sits exactly on the
/// regret-matching fallback boundary, which is a documented non-smooth point.
void randomize_head(NetworkParams& params, double scale, std::uint64_t seed);

/// Per-step activations recorded for reverse-mode differentiation.
struct StepActivations {
  Eigen::VectorXd input;
  Eigen::VectorXd i1, f1, g1, o1, c1_prev, c1, h1;
  Eigen::VectorXd i2, f2, g2, o2, c2_prev, c2, h2;
  Eigen::VectorXd h1_prev, h2_prev;
  Eigen::VectorXd head_linear;  // pre-activation head output
  Eigen::VectorXd head_out;     // sigma (softmax head) or p (bounded head)
};

/// Advances the recurrent state by one step and returns the head output.
/// When `record` is non-null the full activation set is saved for backprop.
/// Throws on non-finite activations, tagging the failure with `step_label`.
Eigen::VectorXd recurrent_forward(const NetworkParams& params, const Eigen::VectorXd& features,
                                  RecurrentState& state, StepActivations* record = nullptr,
                                  const char* step_label = "");

/// Network input: last reward scaled by 1/delta_max, cumulative regret scaled
/// by 1/(delta_max * max(step,1)), then the context block.
Eigen::VectorXd build_features(const Eigen::VectorXd& last_reward,
                               const Eigen::VectorXd& cumulative_regret, int step,
                               double delta_max, const Eigen::VectorXd& context);

/// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace rlab
