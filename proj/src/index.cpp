#include "mvo/index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mvo {

int SpatialTree::height() const {
  int h = 0;
  for (const auto& n : nodes_) {
    if (!n.isLeaf()) continue;
    int depth = 0;
    for (int cur = n.id; nodes_[cur].parent >= 0; cur = nodes_[cur].parent) ++depth;
    h = std::max(h, depth);
  }
  return h;
}

std::vector<int> SpatialTree::childEntries(int nodeId, const RemovalScratch* scratch) const {
  const TreeNode& n = node(nodeId);
  if (scratch == nullptr || scratch->empty()) return n.children;
  std::vector<int> out;
  out.reserve(n.children.size());
  for (int c : n.children) {
    if (!scratch->isRemoved(c)) out.push_back(c);
  }
  return out;
}

void SpatialTree::markRemoved(RemovalScratch& scratch, int nodeId) const {
  const TreeNode& n = node(nodeId);
  if (scratch.isRemoved(nodeId))
    throw std::logic_error("markRemoved: node " + std::to_string(nodeId) + " already removed");
  for (int cur = n.parent; cur >= 0; cur = nodes_[cur].parent) {
    if (scratch.isRemoved(cur))
      throw std::logic_error("markRemoved: ancestor of node " + std::to_string(nodeId) +
                             " already removed");
  }
  scratch.removedNodeIds.insert(nodeId);
  scratch.removedWeight += n.weight;
}

std::vector<int> SpatialTree::survivingLeaves(const RemovalScratch& scratch) const {
  std::vector<int> out;
  std::vector<int> stack{rootId_};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (scratch.isRemoved(cur)) continue;
    const TreeNode& n = nodes_[cur];
    if (n.isLeaf()) {
      out.push_back(cur);
    } else {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

Mbb SpatialTree::trimmedMbb(const RemovalScratch& scratch) const {
  if (scratch.empty()) return root().mbb;
  const auto leaves = survivingLeaves(scratch);
  if (leaves.empty()) throw std::logic_error("trimmedMbb: every leaf removed");
  Mbb box = nodes_[leaves[0]].mbb;
  for (size_t i = 1; i < leaves.size(); ++i) box.expand(nodes_[leaves[i]].mbb);
  return box;
}

const LocalTree& GlobalTree::localTreeOf(const std::string& objectId) const {
  auto it = slotOf.find(objectId);
  if (it == slotOf.end()) throw std::invalid_argument("unknown object id '" + objectId + "'");
  return localTrees[it->second];
}

namespace {

struct BuildItem {
  Mbb mbb;
  double weight;
  int payload;  // leaf payload, or node id when packing upper levels
  std::vector<double> center;
};

// Sort-tile-recursive ordering: sorts items[first,last) so that consecutive
// runs of `fanout` make spatially tight groups. Slab sizes stay multiples of
// the page capacity, so only the very last run of a level can underfill.
void strOrder(std::vector<BuildItem>& items, size_t first, size_t last, int axis, int dims,
              int fanout) {
  const size_t n = last - first;
  if (n <= static_cast<size_t>(fanout) || axis >= dims - 1) {
    std::stable_sort(items.begin() + first, items.begin() + last,
                     [axis](const BuildItem& a, const BuildItem& b) {
                       return a.center[axis] < b.center[axis];
                     });
    return;
  }
  const size_t pages = (n + fanout - 1) / fanout;
  const double frac = 1.0 / static_cast<double>(dims - axis);
  const size_t slabs = static_cast<size_t>(std::ceil(std::pow(static_cast<double>(pages), frac)));
  const size_t pagesPerSlab = (pages + slabs - 1) / slabs;
  const size_t slabItems = pagesPerSlab * fanout;
  std::stable_sort(items.begin() + first, items.begin() + last,
                   [axis](const BuildItem& a, const BuildItem& b) {
                     return a.center[axis] < b.center[axis];
                   });
  for (size_t s = first; s < last; s += slabItems) {
    strOrder(items, s, std::min(s + slabItems, last), axis + 1, dims, fanout);
  }
}

// Packs items into a complete tree bottom-up. Node ids are assigned in
// creation order: all leaves first, then each internal level, root last.
void packTree(SpatialTree& tree, std::vector<BuildItem> items, int dims, int fanout) {
  if (fanout < 2) throw std::invalid_argument("maxFanout must be at least 2");
  strOrder(items, 0, items.size(), 0, dims, fanout);

  std::vector<int> level;
  level.reserve(items.size());
  for (const auto& it : items) {
    TreeNode leaf;
    leaf.id = static_cast<int>(tree.nodes_.size());
    leaf.mbb = it.mbb;
    leaf.weight = it.weight;
    leaf.payload = it.payload;
    leaf.leafCount = 1;
    level.push_back(leaf.id);
    tree.nodes_.push_back(std::move(leaf));
  }

  while (level.size() > 1) {
    std::vector<int> next;
    for (size_t i = 0; i < level.size(); i += fanout) {
      const size_t end = std::min(i + fanout, level.size());
      TreeNode parent;
      parent.id = static_cast<int>(tree.nodes_.size());
      parent.mbb = tree.nodes_[level[i]].mbb;
      for (size_t c = i; c < end; ++c) {
        TreeNode& child = tree.nodes_[level[c]];
        child.parent = parent.id;
        parent.children.push_back(child.id);
        parent.weight += child.weight;
        parent.leafCount += child.leafCount;
        if (c > i) parent.mbb.expand(child.mbb);
      }
      next.push_back(parent.id);
      tree.nodes_.push_back(std::move(parent));
    }
    level = std::move(next);
    // regroup upper levels by the freshly merged boxes
    if (level.size() > 1) {
      std::vector<BuildItem> upper;
      upper.reserve(level.size());
      for (int id : level) {
        const TreeNode& n = tree.nodes_[id];
        upper.push_back(BuildItem{n.mbb, 0.0, n.id, n.mbb.center()});
      }
      strOrder(upper, 0, upper.size(), 0, dims, fanout);
      for (size_t i = 0; i < upper.size(); ++i) level[i] = upper[i].payload;
    }
  }
  tree.rootId_ = level.empty() ? -1 : level[0];
}

}  // namespace

LocalTree buildLocalTree(const MultiValuedObject& o, int maxFanout) {
  if (o.instances.empty()) throw std::invalid_argument("buildLocalTree: object has no instances");
  const int dims = static_cast<int>(o.instances[0].coords.size());
  validateObject(o, dims);
  LocalTree tree;
  tree.objectId = o.id;
  std::vector<BuildItem> items;
  items.reserve(o.instances.size());
  for (size_t i = 0; i < o.instances.size(); ++i) {
    const auto& inst = o.instances[i];
    items.push_back(
        BuildItem{pointMbb(inst.coords), inst.weight, static_cast<int>(i), inst.coords});
  }
  packTree(tree, std::move(items), dims, maxFanout);
  return tree;
}

GlobalTree buildGlobalTree(const Dataset& d, int maxFanout) {
  validateDataset(d);
  if (d.objects.empty()) throw std::invalid_argument("buildGlobalTree: empty dataset");
  GlobalTree tree;
  tree.localTrees.reserve(d.objects.size());
  std::vector<BuildItem> items;
  items.reserve(d.objects.size());
  const double leafFraction = 1.0 / static_cast<double>(d.objects.size());
  for (size_t i = 0; i < d.objects.size(); ++i) {
    LocalTree lt = buildLocalTree(d.objects[i], maxFanout);
    const Mbb box = lt.root().mbb;
    tree.slotOf.emplace(d.objects[i].id, static_cast<int>(i));
    tree.localTrees.push_back(std::move(lt));
    items.push_back(BuildItem{box, leafFraction, static_cast<int>(i), box.center()});
  }
  packTree(tree, std::move(items), d.dims, maxFanout);
  return tree;
}

namespace {
void dumpNode(const SpatialTree& tree, int nodeId, int depth, std::ostream& out) {
  const TreeNode& n = tree.node(nodeId);
  for (int i = 0; i < depth; ++i) out << "  ";
  out << "node " << n.id << " mbb=[(";
  for (int k = 0; k < n.mbb.dims(); ++k) out << (k ? "," : "") << n.mbb.lo[k];
  out << ")-(";
  for (int k = 0; k < n.mbb.dims(); ++k) out << (k ? "," : "") << n.mbb.hi[k];
  out << ")] w=" << n.weight;
  if (n.isLeaf()) out << " payload=" << n.payload;
  out << "\n";
  for (int c : n.children) dumpNode(tree, c, depth + 1, out);
}
}  // namespace

void dumpTree(const SpatialTree& tree, std::ostream& out) {
  if (tree.rootId_ >= 0) dumpNode(tree, tree.rootId_, 0, out);
}

}  // namespace mvo
