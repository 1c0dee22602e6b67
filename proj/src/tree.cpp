#include "ptmc/tree.hpp"

#include <utility>

namespace ptmc {

PlaneTree::PlaneTree() : children_(1), parent_(1, 0) {}

NodeId PlaneTree::add_child(NodeId parent) {
  const auto id = static_cast<NodeId>(parent_.size());
  parent_.push_back(parent);
  children_.emplace_back();
  children_[parent].push_back(id);
  return id;
}

bool operator==(const PlaneTree& a, const PlaneTree& b) {
  return a.node_count() == b.node_count() && tree_to_text(a) == tree_to_text(b);
}

DegreeProfile degree_profile(const PlaneTree& t) {
  if (t.edge_count() == 0) {
    throw Error(ErrorCode::EmptyTree, "degree profile needs at least one edge");
  }
  DegreeProfile p;
  p.n = t.edge_count();
  p.r = t.children(t.root()).size();
  for (NodeId v = 1; v < t.node_count(); ++v) {
    const auto deg = t.children(v).size();
    if (deg == 0) ++p.d0;
    if (deg == 1) ++p.d1;
  }
  return p;
}

DegreeProfile degree_profile(const TwoMotzkinPath& x) {
  DegreeProfile p;
  p.n = x.size() + 1;
  p.d0 = 1;
  p.r = 1;
  std::size_t height = 0;
  for (Symbol s : x.symbols()) {
    switch (s) {
      case Symbol::U: ++p.d0; ++height; break;
      case Symbol::D: --height; break;
      case Symbol::I: ++p.d1; break;
      case Symbol::H:
        ++p.d0;
        // An H at ground level hangs off the root.
        if (height == 0) ++p.r;
        break;
    }
  }
  return p;
}

TwoMotzkinPath encode(const PlaneTree& t) {
  if (t.edge_count() == 0) {
    throw Error(ErrorCode::EmptyTree, "encode needs at least one edge");
  }
  std::vector<Symbol> labels;
  labels.reserve(t.edge_count());
  std::vector<NodeId> stack(1, t.root());
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (v != t.root()) {
      const NodeId p = t.parent(v);
      const auto siblings = t.children(p);
      Symbol label = Symbol::H;
      if (p != t.root()) {
        if (siblings.size() == 1) {
          label = Symbol::I;
        } else if (siblings.front() == v) {
          label = Symbol::U;
        } else if (siblings.back() == v) {
          label = Symbol::D;
        }
      }
      labels.push_back(label);
    }
    const auto kids = t.children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (labels.front() != Symbol::H) {
    throw Error(ErrorCode::InternalInvariantViolation,
                "preorder labelling does not start with H");
  }
  labels.erase(labels.begin());
  if (auto v = find_violation(labels)) {
    throw Error(ErrorCode::InternalInvariantViolation,
                "edge labelling produced an invalid path", v->index);
  }
  return detail::PathAccess::adopt(std::move(labels));
}

PlaneTree decode(const TwoMotzkinPath& x) {
  PlaneTree t;
  NodeId attach = t.root();
  NodeId last = t.add_child(t.root());
  std::vector<NodeId> stack;
  for (Symbol s : x.symbols()) {
    NodeId node = 0;
    switch (s) {
      case Symbol::U:
        node = t.add_child(last);
        stack.push_back(attach);
        attach = last;
        break;
      case Symbol::I:
        node = t.add_child(last);
        break;
      case Symbol::H:
        node = t.add_child(attach);
        break;
      case Symbol::D:
        node = t.add_child(attach);
        attach = stack.back();
        stack.pop_back();
        break;
    }
    last = node;
  }
  return t;
}

std::string tree_to_text(const PlaneTree& t) {
  std::string out;
  out.reserve(2 * t.edge_count());
  // (node, index of next child to visit)
  std::vector<std::pair<NodeId, std::size_t>> stack;
  stack.emplace_back(t.root(), 0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto kids = t.children(v);
    if (next < kids.size()) {
      const NodeId c = kids[next++];
      out.push_back('(');
      stack.emplace_back(c, 0);
    } else {
      if (v != t.root()) out.push_back(')');
      stack.pop_back();
    }
  }
  return out;
}

PlaneTree text_to_tree(std::string_view text) {
  PlaneTree t;
  NodeId cur = t.root();
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') {
      cur = t.add_child(cur);
    } else if (text[i] == ')') {
      if (cur == t.root()) {
        throw Error(ErrorCode::UnbalancedParens,
                    "unmatched ')' at index " + std::to_string(i), i);
      }
      cur = t.parent(cur);
    } else {
      throw Error(ErrorCode::UnbalancedParens,
                  "unexpected character at index " + std::to_string(i), i);
    }
  }
  if (cur != t.root()) {
    throw Error(ErrorCode::UnbalancedParens, "unclosed '(' at end of input",
                text.size());
  }
  return t;
}

}  // namespace ptmc
