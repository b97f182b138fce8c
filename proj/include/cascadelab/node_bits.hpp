#ifndef CASCADELAB_NODE_BITS_HPP
#define CASCADELAB_NODE_BITS_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace cascadelab {

using NodeId = std::int32_t;

/**
  Fixed-size bit vector over node ids 0..n-1. Used for seed sets, active
  sets and reachability features where the hot operation is "do these two
  sets intersect".
*/
class NodeBits {
 public:
  NodeBits() = default;
  explicit NodeBits(int n) : n_(n), words_((n + 63) / 64, 0) {}

  static NodeBits of(int n, const std::vector<NodeId>& ids) {
    NodeBits b(n);
    for (NodeId v : ids) b.set(v);
    return b;
  }

  int size() const { return n_; }

  void set(NodeId i) { words_[i >> 6] |= (1ULL << (i & 63)); }
  void reset(NodeId i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(NodeId i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

  bool intersects(const NodeBits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  std::vector<NodeId> to_ids() const {
    std::vector<NodeId> ids;
    for (NodeId i = 0; i < n_; ++i)
      if (test(i)) ids.push_back(i);
    return ids;
  }

  bool operator==(const NodeBits&) const = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cascadelab

#endif
