#pragma once

#include <iosfwd>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mvo/model.hpp"

namespace mvo {

// Node of a bulk-loaded spatial tree. Nodes live in a flat arena owned by the
// tree; children refer to arena slots, which double as stable node ids.
struct TreeNode {
  int id = -1;
  Mbb mbb;
  double weight = 0.0;
  std::vector<int> children;  // empty for leaves
  int payload = -1;           // leaf only: instance index (local) / object slot (global)
  int parent = -1;
  int leafCount = 0;

  bool isLeaf() const { return children.empty(); }
};

// Per-query logical removal of subtrees. Trees themselves stay immutable, so
// concurrent queries each bring their own scratch.
struct RemovalScratch {
  std::unordered_set<int> removedNodeIds;
  double removedWeight = 0.0;

  bool isRemoved(int nodeId) const { return removedNodeIds.count(nodeId) != 0; }
  bool empty() const { return removedNodeIds.empty(); }
  void reset() {
    removedNodeIds.clear();
    removedWeight = 0.0;
  }
};

class SpatialTree {
 public:
  const TreeNode& node(int id) const { return nodes_.at(id); }
  const TreeNode& root() const { return nodes_[rootId_]; }
  int rootId() const { return rootId_; }
  int nodeCount() const { return static_cast<int>(nodes_.size()); }
  int height() const;  // edges on the longest root-to-leaf path

  // Children of a node, minus any the scratch has removed.
  std::vector<int> childEntries(int nodeId, const RemovalScratch* scratch = nullptr) const;

  // Marks a subtree removed. Double-marking, or marking below an already
  // removed ancestor, is a pruning-logic bug and throws.
  void markRemoved(RemovalScratch& scratch, int nodeId) const;

  // Leaf ids that survive the scratch, in left-to-right tree order.
  std::vector<int> survivingLeaves(const RemovalScratch& scratch) const;

  // Bounding box over surviving leaves; throws if everything is removed.
  Mbb trimmedMbb(const RemovalScratch& scratch) const;

  std::vector<TreeNode> nodes_;
  int rootId_ = -1;
};

// Index over one object's instances. Leaves record single instances
// (payload = instance index); every node carries its subtree's weight.
class LocalTree : public SpatialTree {
 public:
  std::string objectId;
  int leafCount() const { return root().leafCount; }
};

// Index over all objects' bounding boxes. Leaves point at the object's local
// tree via payload slot. Node weights are uniform leaf fractions; nothing
// consumes them, they just keep the shared node invariants intact.
class GlobalTree : public SpatialTree {
 public:
  std::vector<LocalTree> localTrees;  // dataset order
  std::unordered_map<std::string, int> slotOf;

  const LocalTree& localTreeOf(const std::string& objectId) const;
  const std::string& objectIdOfLeaf(int leafNodeId) const { return localTrees[node(leafNodeId).payload].objectId; }
};

// Sort-tile-recursive bulk load; deterministic for a fixed input order.
// maxFanout children per internal node, only the build order's last node
// per level may underfill.
LocalTree buildLocalTree(const MultiValuedObject& o, int maxFanout = 8);
GlobalTree buildGlobalTree(const Dataset& d, int maxFanout = 8);

// Indented debug dump: one line per node with id, mbb, weight.
void dumpTree(const SpatialTree& tree, std::ostream& out);

}  // namespace mvo
