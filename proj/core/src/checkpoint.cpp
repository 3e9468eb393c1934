#include "rlab/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rlab {

namespace {

constexpr char kMagic[8] = {'R', 'L', 'A', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::string get_str(std::istream& in) {
  std::uint32_t n = get_u32(in);
  if (n > (1u << 20)) throw std::runtime_error("checkpoint: unreasonable string length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return s;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kMagic, 8);
  put_u32(out, kVersion);
  put_str(out, meta.algorithm);
  put_str(out, meta.distribution);
  put_u32(out, static_cast<std::uint32_t>(meta.train_horizon));
  put_f64(out, meta.delta_max);
  put_u64(out, meta.seed);
  put_u64(out, meta.config_digest);

  put_u32(out, params.head_kind == HeadKind::kStrategySoftmax ? 0 : 1);
  put_f64(out, params.alpha);
  put_u32(out, static_cast<std::uint32_t>(params.input_dim));
  put_u32(out, static_cast<std::uint32_t>(params.hidden_dim));
  put_u32(out, static_cast<std::uint32_t>(params.action_dim));

  auto views = block_views(const_cast<ParamBlocks&>(params.blocks));
  put_u32(out, static_cast<std::uint32_t>(views.size()));
  for (const BlockView& v : views) {
    put_str(out, v.name);
    put_u32(out, static_cast<std::uint32_t>(v.rows));
    put_u32(out, static_cast<std::uint32_t>(v.cols));
    // Stored row-major; Eigen matrices are column-major in memory.
    for (int r = 0; r < v.rows; ++r) {
      for (int c = 0; c < v.cols; ++c) {
        put_f64(out, v.data[static_cast<std::ptrdiff_t>(c) * v.rows + r]);
      }
    }
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != std::string(kMagic, 8)) {
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  }
  std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw std::runtime_error("load_checkpoint: unsupported format version " +
                             std::to_string(version));
  }
  Checkpoint ck;
  ck.meta.algorithm = get_str(in);
  ck.meta.distribution = get_str(in);
  ck.meta.train_horizon = static_cast<int>(get_u32(in));
  ck.meta.delta_max = get_f64(in);
  ck.meta.seed = get_u64(in);
  ck.meta.config_digest = get_u64(in);

  std::uint32_t head = get_u32(in);
  ck.params.head_kind = head == 0 ? HeadKind::kStrategySoftmax : HeadKind::kPredictionBounded;
  ck.params.alpha = get_f64(in);
  ck.params.input_dim = static_cast<int>(get_u32(in));
  ck.params.hidden_dim = static_cast<int>(get_u32(in));
  ck.params.action_dim = static_cast<int>(get_u32(in));

  // Allocate tensors from the declared dimensions, then require the stored
  // blocks to match exactly.
  ck.params.blocks = [&] {
    NetworkParams proto = init_network(ck.params.head_kind, ck.params.input_dim,
                                       ck.params.hidden_dim, ck.params.action_dim,
                                       ck.params.alpha, 0);
    return zeros_like(proto.blocks);
  }();

  auto views = block_views(ck.params.blocks);
  std::uint32_t count = get_u32(in);
  if (count != views.size()) {
    throw std::runtime_error("load_checkpoint: block count mismatch");
  }
  for (BlockView& v : views) {
    std::string name = get_str(in);
    std::uint32_t rows = get_u32(in);
    std::uint32_t cols = get_u32(in);
    if (name != v.name || rows != static_cast<std::uint32_t>(v.rows) ||
        cols != static_cast<std::uint32_t>(v.cols)) {
      throw std::runtime_error("load_checkpoint: dimension mismatch for block " + name);
    }
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        v.data[static_cast<std::ptrdiff_t>(c) * rows + r] = get_f64(in);
      }
    }
  }
  return ck;
}

}  // namespace rlab
