#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "commlb/core.hpp"
#include "commlb/pseudotranscript.hpp"

namespace commlb {

enum class Party : std::uint8_t { Alice, Bob };

/// Deterministic two-party protocol tree. Each internal node lets one party
/// send a single bit computed from its own input; leaves carry the output.
/// Nodes live in an arena; node 0 is the root.
class ProtocolTree {
 public:
  struct Node {
    bool leaf = true;
    int z = 0;
    Party speaker = Party::Alice;
    std::vector<std::uint8_t> msg;  // bit sent for each value of the speaker's input
    std::size_t child[2] = {0, 0};
  };

  static ProtocolTree leaf(std::size_t x_size, std::size_t y_size, std::size_t z_size, int z);
  /// Internal node; `on_zero` / `on_one` must share this tree's alphabets.
  static ProtocolTree speak(Party speaker, std::vector<std::uint8_t> msg, const ProtocolTree& on_zero,
                            const ProtocolTree& on_one);

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  std::size_t z_size() const { return z_size_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t id) const { return nodes_[id]; }

  /// Leaf ids in depth-first order (zero branch first).
  std::vector<std::size_t> leaves() const;

  /// Longest root-to-leaf path.
  std::size_t depth() const;

 private:
  ProtocolTree(std::size_t x_size, std::size_t y_size, std::size_t z_size)
      : x_size_(x_size), y_size_(y_size), z_size_(z_size) {}
  std::size_t graft(const ProtocolTree& sub);

  std::size_t x_size_;
  std::size_t y_size_;
  std::size_t z_size_;
  std::vector<Node> nodes_;
};

struct RunResult {
  std::size_t leaf = 0;
  std::vector<std::uint8_t> transcript;
  int z = 0;
};

RunResult run(const ProtocolTree& tree, std::size_t x, std::size_t y);

/// max_{x,y} of the number of bits exchanged.
std::size_t worst_case_bits(const ProtocolTree& tree);

/// Error function of a deterministic protocol: 1 where its output is rejected.
RationalGrid protocol_error(const Relation& rel, const ProtocolTree& tree);

/// Public-coin mixture of deterministic trees; weights sum to 1.
using ProtocolMixture = std::vector<std::pair<ProtocolTree, Rational>>;

RationalGrid protocol_error(const Relation& rel, const ProtocolMixture& mixture);

/// max over coins and inputs of the bits exchanged (coin bits excluded).
std::size_t worst_case_bits(const ProtocolMixture& mixture);

struct TranscriptPseudotranscript {
  Pseudotranscript pseudotranscript;
  /// (coin index, leaf id) for each outcome, in outcome order.
  std::vector<std::pair<std::size_t, std::size_t>> keys;
};

/// Outcome per reachable (coin, leaf): p(q|x,y) = coin weight when the tree
/// for that coin reaches the leaf on (x,y).
TranscriptPseudotranscript transcript_pseudotranscript(const ProtocolMixture& mixture);

struct EnumerationLimits {
  std::size_t max_side = 3;
  std::size_t max_bits = 4;
};

struct ZeroErrorProtocol {
  std::size_t bits = 0;
  ProtocolTree witness;
};

/// Minimum worst-case communication of a zero-error deterministic protocol,
/// searched exhaustively over canonical trees (every message splits the
/// current rectangle) with at most max_bits rounds. Empty when none exists
/// within the cap. Throws SizeLimitError above the enumeration limits.
std::optional<ZeroErrorProtocol> enumerate_zero_error(const Relation& rel, std::size_t max_bits,
                                                      const EnumerationLimits& limits = {});

/// Every canonical tree of depth <= max_bits over the alphabets, with every
/// leaf label. Subject to the same limits as enumerate_zero_error.
std::vector<ProtocolTree> enumerate_protocols(std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                              std::size_t max_bits, const EnumerationLimits& limits = {});

}  // namespace commlb
