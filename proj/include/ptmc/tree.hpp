#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptmc/paths.hpp"

namespace ptmc {

using NodeId = std::uint32_t;

/// Rooted ordered tree stored as a node arena. Node 0 is the root; children
/// are kept in plane order.
class PlaneTree {
 public:
  /// A lone root (zero edges).
  PlaneTree();

  NodeId root() const { return 0; }
  NodeId add_child(NodeId parent);

  std::size_t node_count() const { return parent_.size(); }
  std::size_t edge_count() const { return parent_.size() - 1; }
  std::span<const NodeId> children(NodeId v) const { return children_[v]; }
  NodeId parent(NodeId v) const { return parent_[v]; }

  /// Ordered child lists indexed by node id.
  const std::vector<std::vector<NodeId>>& adjacency() const { return children_; }

  /// Shape equality: same plane structure, regardless of node numbering.
  friend bool operator==(const PlaneTree& a, const PlaneTree& b);

 private:
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> parent_;
};

struct DegreeProfile {
  std::size_t d0 = 0;  // leaves
  std::size_t d1 = 0;  // non-root nodes with exactly one child
  std::size_t r = 0;   // root down-degree
  std::size_t n = 0;   // edges

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

/// Throws EmptyTree for a tree without edges.
DegreeProfile degree_profile(const PlaneTree& t);

/// Profile of decode(x), computed directly from the word in one pass.
DegreeProfile degree_profile(const TwoMotzkinPath& x);

/// Edge-labelling bijection from trees with n >= 1 edges to paths of
/// length n - 1.
TwoMotzkinPath encode(const PlaneTree& t);

/// Inverse of encode. Builds the tree with a stack of attachment points:
/// U descends into the newest node, D attaches to the current point and
/// pops, H attaches to the current point, I extends the newest node.
PlaneTree decode(const TwoMotzkinPath& x);

/// Balanced parentheses in preorder: '(' descending an edge, ')' ascending.
std::string tree_to_text(const PlaneTree& t);
/// Throws UnbalancedParens with the first offending index.
PlaneTree text_to_tree(std::string_view text);

}  // namespace ptmc
