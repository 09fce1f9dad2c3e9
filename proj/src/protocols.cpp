#include "commlb/protocols.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>

#include "commlb/errors.hpp"

namespace commlb {

ProtocolTree ProtocolTree::leaf(std::size_t x_size, std::size_t y_size, std::size_t z_size, int z) {
  if (x_size == 0 || y_size == 0 || z_size == 0) throw ValidationError("alphabet sizes must be at least 1");
  if (z < 0 || static_cast<std::size_t>(z) >= z_size)
    throw ValidationError("leaf output " + std::to_string(z) + " outside [0," + std::to_string(z_size) + ")");
  ProtocolTree t(x_size, y_size, z_size);
  Node n;
  n.z = z;
  t.nodes_.push_back(n);
  return t;
}

ProtocolTree ProtocolTree::speak(Party speaker, std::vector<std::uint8_t> msg, const ProtocolTree& on_zero,
                                 const ProtocolTree& on_one) {
  if (on_zero.x_size_ != on_one.x_size_ || on_zero.y_size_ != on_one.y_size_ || on_zero.z_size_ != on_one.z_size_)
    throw ValidationError("protocol subtrees have mismatched alphabets");
  const std::size_t domain = speaker == Party::Alice ? on_zero.x_size_ : on_zero.y_size_;
  if (msg.size() != domain)
    throw ValidationError("message map has " + std::to_string(msg.size()) + " entries, expected " +
                          std::to_string(domain));
  for (std::uint8_t b : msg)
    if (b > 1) throw ValidationError("message map entries must be 0 or 1");
  ProtocolTree t(on_zero.x_size_, on_zero.y_size_, on_zero.z_size_);
  Node root;
  root.leaf = false;
  root.speaker = speaker;
  root.msg = std::move(msg);
  t.nodes_.push_back(std::move(root));
  const std::size_t zero = t.graft(on_zero);
  const std::size_t one = t.graft(on_one);
  t.nodes_[0].child[0] = zero;
  t.nodes_[0].child[1] = one;
  return t;
}

std::size_t ProtocolTree::graft(const ProtocolTree& sub) {
  const std::size_t offset = nodes_.size();
  for (Node n : sub.nodes_) {
    if (!n.leaf) {
      n.child[0] += offset;
      n.child[1] += offset;
    }
    nodes_.push_back(std::move(n));
  }
  return offset;
}

std::vector<std::size_t> ProtocolTree::leaves() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (nodes_[id].leaf) {
      out.push_back(id);
    } else {
      stack.push_back(nodes_[id].child[1]);
      stack.push_back(nodes_[id].child[0]);
    }
  }
  return out;
}

std::size_t ProtocolTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t id) -> std::size_t {
    if (nodes_[id].leaf) return 0;
    return 1 + std::max(walk(nodes_[id].child[0]), walk(nodes_[id].child[1]));
  };
  return walk(0);
}

RunResult run(const ProtocolTree& tree, std::size_t x, std::size_t y) {
  if (x >= tree.x_size() || y >= tree.y_size()) throw ValidationError("protocol input out of range");
  RunResult r;
  std::size_t id = 0;
  while (!tree.node(id).leaf) {
    const auto& n = tree.node(id);
    const std::uint8_t bit = n.msg[n.speaker == Party::Alice ? x : y];
    r.transcript.push_back(bit);
    id = n.child[bit];
  }
  r.leaf = id;
  r.z = tree.node(id).z;
  return r;
}

std::size_t worst_case_bits(const ProtocolTree& tree) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < tree.x_size(); ++x)
    for (std::size_t y = 0; y < tree.y_size(); ++y) best = std::max(best, run(tree, x, y).transcript.size());
  return best;
}

RationalGrid protocol_error(const Relation& rel, const ProtocolTree& tree) {
  return protocol_error(rel, ProtocolMixture{{tree, Rational(1)}});
}

namespace {

void check_mixture(const ProtocolMixture& mixture) {
  if (mixture.empty()) throw ValidationError("protocol mixture is empty");
  Rational sum = 0;
  const ProtocolTree& first = mixture.front().first;
  for (const auto& [tree, weight] : mixture) {
    if (tree.x_size() != first.x_size() || tree.y_size() != first.y_size() || tree.z_size() != first.z_size())
      throw ValidationError("protocol mixture has trees with mismatched alphabets");
    if (sgn(weight) < 0) throw ValidationError("negative public-coin weight " + to_string(weight));
    sum += weight;
  }
  if (sum != 1) throw ValidationError("public-coin weights sum to " + to_string(sum) + ", not 1");
}

}  // namespace

RationalGrid protocol_error(const Relation& rel, const ProtocolMixture& mixture) {
  check_mixture(mixture);
  const ProtocolTree& first = mixture.front().first;
  if (first.x_size() != rel.x_size() || first.y_size() != rel.y_size() || first.z_size() != rel.z_size())
    throw ValidationError("protocol alphabets do not match the relation");
  RationalGrid err(rel.x_size(), rel.y_size(), Rational(0));
  for (const auto& [tree, weight] : mixture)
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (!rel.accepts(x, y, run(tree, x, y).z)) err.at(x, y) += weight;
  return err;
}

std::size_t worst_case_bits(const ProtocolMixture& mixture) {
  std::size_t best = 0;
  for (const auto& [tree, weight] : mixture) best = std::max(best, worst_case_bits(tree));
  return best;
}

TranscriptPseudotranscript transcript_pseudotranscript(const ProtocolMixture& mixture) {
  check_mixture(mixture);
  const ProtocolTree& first = mixture.front().first;
  std::vector<Outcome> outcomes;
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  for (std::size_t c = 0; c < mixture.size(); ++c) {
    const auto& [tree, weight] = mixture[c];
    if (sgn(weight) == 0) continue;
    std::map<std::size_t, RationalGrid> reached;
    for (std::size_t x = 0; x < tree.x_size(); ++x)
      for (std::size_t y = 0; y < tree.y_size(); ++y) {
        const std::size_t leaf = run(tree, x, y).leaf;
        auto [it, fresh] = reached.try_emplace(leaf, tree.x_size(), tree.y_size(), Rational(0));
        it->second.at(x, y) = weight;
      }
    for (auto& [leaf, matrix] : reached) {
      outcomes.push_back({tree.node(leaf).z, std::move(matrix)});
      keys.emplace_back(c, leaf);
    }
  }
  return {Pseudotranscript(first.x_size(), first.y_size(), first.z_size(), std::move(outcomes)), std::move(keys)};
}

namespace {

void check_limits(std::size_t x_size, std::size_t y_size, std::size_t max_bits, const EnumerationLimits& limits) {
  if (x_size > limits.max_side || y_size > limits.max_side)
    throw SizeLimitError("protocol enumeration supports sides up to " + std::to_string(limits.max_side) + ", got " +
                         std::to_string(x_size) + "x" + std::to_string(y_size));
  if (max_bits > limits.max_bits)
    throw SizeLimitError("protocol enumeration supports up to " + std::to_string(limits.max_bits) +
                         " bits, got " + std::to_string(max_bits));
}

std::vector<std::uint8_t> split_message(std::uint64_t ones, std::size_t domain) {
  std::vector<std::uint8_t> msg(domain, 0);
  for (std::size_t i = 0; i < domain; ++i) msg[i] = static_cast<std::uint8_t>((ones >> i) & 1U);
  return msg;
}

class ZeroErrorSearch {
 public:
  explicit ZeroErrorSearch(const Relation& rel) : rel_(rel) {}

  // Minimum bits to solve the rectangle, with the best first move recorded.
  std::size_t cost(std::uint64_t xs, std::uint64_t ys) {
    const auto key = std::make_pair(xs, ys);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.bits;
    Choice best;
    if (const int z = monochromatic(xs, ys); z >= 0) {
      best.z = z;
      best.bits = 0;
    } else {
      best.bits = static_cast<std::size_t>(-1);
      // Each side S (sending 1) and its complement are both visited; the
      // first minimum in mask order wins, which keeps witnesses deterministic.
      for (const Party p : {Party::Alice, Party::Bob}) {
        const std::uint64_t side = p == Party::Alice ? xs : ys;
        for (std::uint64_t s = (side - 1) & side; s != 0; s = (s - 1) & side) {
          const std::uint64_t rest = side & ~s;
          std::size_t c0 = p == Party::Alice ? cost(rest, ys) : cost(xs, rest);
          std::size_t c1 = p == Party::Alice ? cost(s, ys) : cost(xs, s);
          const std::size_t c = 1 + std::max(c0, c1);
          if (c < best.bits || (c == best.bits && (p < best.speaker || (p == best.speaker && s < best.ones)))) {
            best.bits = c;
            best.speaker = p;
            best.ones = s;
          }
        }
      }
    }
    memo_[key] = best;
    return best.bits;
  }

  ProtocolTree witness(std::uint64_t xs, std::uint64_t ys) {
    cost(xs, ys);
    const Choice c = memo_.at({xs, ys});
    if (c.z >= 0) return ProtocolTree::leaf(rel_.x_size(), rel_.y_size(), rel_.z_size(), c.z);
    if (c.speaker == Party::Alice)
      return ProtocolTree::speak(Party::Alice, split_message(c.ones, rel_.x_size()), witness(xs & ~c.ones, ys),
                                 witness(c.ones, ys));
    return ProtocolTree::speak(Party::Bob, split_message(c.ones, rel_.y_size()), witness(xs, ys & ~c.ones),
                               witness(xs, c.ones));
  }

 private:
  struct Choice {
    std::size_t bits = 0;
    int z = -1;
    Party speaker = Party::Alice;
    std::uint64_t ones = 0;
  };

  int monochromatic(std::uint64_t xs, std::uint64_t ys) const {
    for (std::size_t z = 0; z < rel_.z_size(); ++z) {
      bool all = true;
      for (int x : members(xs))
        for (int y : members(ys))
          all = all && rel_.accepts(static_cast<std::size_t>(x), static_cast<std::size_t>(y), static_cast<int>(z));
      if (all) return static_cast<int>(z);
    }
    return -1;
  }

  const Relation& rel_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Choice> memo_;
};

}  // namespace

std::optional<ZeroErrorProtocol> enumerate_zero_error(const Relation& rel, std::size_t max_bits,
                                                      const EnumerationLimits& limits) {
  check_limits(rel.x_size(), rel.y_size(), max_bits, limits);
  ZeroErrorSearch search(rel);
  const std::uint64_t xs = (std::uint64_t{1} << rel.x_size()) - 1;
  const std::uint64_t ys = (std::uint64_t{1} << rel.y_size()) - 1;
  const std::size_t bits = search.cost(xs, ys);
  if (bits > max_bits) return std::nullopt;
  return ZeroErrorProtocol{bits, search.witness(xs, ys)};
}

std::vector<ProtocolTree> enumerate_protocols(std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                              std::size_t max_bits, const EnumerationLimits& limits) {
  check_limits(x_size, y_size, max_bits, limits);
  constexpr std::size_t kMaxTrees = 2'000'000;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::size_t>, std::vector<ProtocolTree>> memo;

  std::function<const std::vector<ProtocolTree>&(std::uint64_t, std::uint64_t, std::size_t)> trees =
      [&](std::uint64_t xs, std::uint64_t ys, std::size_t budget) -> const std::vector<ProtocolTree>& {
    const auto key = std::make_tuple(xs, ys, budget);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<ProtocolTree> out;
    for (std::size_t z = 0; z < z_size; ++z) out.push_back(ProtocolTree::leaf(x_size, y_size, z_size, static_cast<int>(z)));
    if (budget > 0) {
      for (const Party p : {Party::Alice, Party::Bob}) {
        const std::uint64_t side = p == Party::Alice ? xs : ys;
        const std::size_t domain = p == Party::Alice ? x_size : y_size;
        for (std::uint64_t s = (side - 1) & side; s != 0; s = (s - 1) & side) {
          const std::uint64_t rest = side & ~s;
          const auto& zeros = p == Party::Alice ? trees(rest, ys, budget - 1) : trees(xs, rest, budget - 1);
          const auto& ones = p == Party::Alice ? trees(s, ys, budget - 1) : trees(xs, s, budget - 1);
          if (out.size() + zeros.size() * ones.size() > kMaxTrees)
            throw SizeLimitError("protocol enumeration exceeds " + std::to_string(kMaxTrees) + " trees");
          const auto msg = split_message(s, domain);
          for (const auto& a : zeros)
            for (const auto& b : ones) out.push_back(ProtocolTree::speak(p, msg, a, b));
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  const std::uint64_t xs = (std::uint64_t{1} << x_size) - 1;
  const std::uint64_t ys = (std::uint64_t{1} << y_size) - 1;
  return trees(xs, ys, max_bits);
}

}  // namespace commlb
