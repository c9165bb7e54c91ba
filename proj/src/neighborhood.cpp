#include "mvo/neighborhood.hpp"

#include <deque>
#include <set>
#include <stdexcept>

namespace mvo {

PruningLevel parsePruningLevel(const std::string& s) {
  if (s == "P0") return PruningLevel::P0;
  if (s == "P1") return PruningLevel::P1;
  if (s == "P1-2") return PruningLevel::P12;
  if (s == "P1-3") return PruningLevel::P13;
  if (s == "P1-4") return PruningLevel::P14;
  throw std::invalid_argument("unknown pruning level '" + s + "'");
}

std::string pruningLevelName(PruningLevel level) {
  switch (level) {
    case PruningLevel::P0: return "P0";
    case PruningLevel::P1: return "P1";
    case PruningLevel::P12: return "P1-2";
    case PruningLevel::P13: return "P1-3";
    case PruningLevel::P14: return "P1-4";
  }
  return "?";
}

void PruneStats::add(const PruneStats& o) {
  entriesVisited += o.entriesVisited;
  for (int r = 0; r < 5; ++r) ruleHits[r] += o.ruleHits[r];
  distanceCallsMade += o.distanceCallsMade;
  distanceCallsSaved += o.distanceCallsSaved;
}

bool pruneRule1(const Mbb& queryMbb, const Mbb& entryMbb, double eps) {
  return dMin(queryMbb, entryMbb) >= eps;
}

bool pruneRule2(const Mbb& queryMbb, const Mbb& entryMbb, double eps) {
  return dMax(queryMbb, entryMbb) <= eps;
}

namespace {

// Shared walk for rules 3 and 4: descends `tree` level by level against a
// fixed box, marking maximal subtrees whose dMin is beyond eps. Subtrees
// wholly within eps are not expanded (they can never be marked). Calls
// `exceeded` after each mark; returns true as soon as it does.
template <class ExceededFn>
bool markBeyondEps(const SpatialTree& tree, RemovalScratch& scratch, const Mbb& box, double eps,
                   ExceededFn&& exceeded) {
  std::vector<int> frontier = tree.childEntries(tree.rootId());
  std::vector<int> next;
  while (!frontier.empty()) {
    next.clear();
    for (int id : frontier) {
      const TreeNode& n = tree.node(id);
      if (dMin(n.mbb, box) > eps) {
        tree.markRemoved(scratch, id);
        if (exceeded()) return true;
      } else if (!n.isLeaf() && dMax(n.mbb, box) > eps) {
        next.insert(next.end(), n.children.begin(), n.children.end());
      }
    }
    frontier.swap(next);
  }
  return false;
}

}  // namespace

bool pruneRule3(const LocalTree& queryTree, RemovalScratch& queryScratch, const Mbb& entryMbb,
                double eps, double alpha) {
  return markBeyondEps(queryTree, queryScratch, entryMbb, eps, [&] {
    return queryScratch.removedWeight > 1.0 - alpha;
  });
}

bool pruneRule4(const LocalTree& queryTree, const RemovalScratch& queryScratch,
                const LocalTree& candTree, RemovalScratch& candScratch, double eps, double alpha) {
  const Mbb trimBox = queryTree.trimmedMbb(queryScratch);
  const double queryWeight = 1.0 - queryScratch.removedWeight;
  return markBeyondEps(candTree, candScratch, trimBox, eps, [&] {
    return (1.0 - candScratch.removedWeight) * queryWeight < alpha;
  });
}

namespace {

void collectObjectsUnder(const GlobalTree& tree, int nodeId, std::set<std::string>& out) {
  const TreeNode& n = tree.node(nodeId);
  if (n.isLeaf()) {
    out.insert(tree.objectIdOfLeaf(n.id));
    return;
  }
  for (int c : n.children) collectObjectsUnder(tree, c, out);
}

}  // namespace

NeighborhoodResult getNeighborhood(const GlobalTree& tree, const std::string& objectId,
                                   const QueryParams& params) {
  if (!(params.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(params.alpha > 0.0) || params.alpha > 1.0)
    throw std::invalid_argument("alpha must be in (0,1]");
  const LocalTree& queryTree = tree.localTreeOf(objectId);
  const Mbb& queryMbb = queryTree.root().mbb;
  const int level = static_cast<int>(params.pruning);

  NeighborhoodResult res;
  std::set<std::string> neighbors{objectId};
  RemovalScratch queryScratch;
  RemovalScratch candScratch;

  std::deque<int> queue;
  if (tree.root().isLeaf()) {
    queue.push_back(tree.rootId());
  } else {
    for (int c : tree.root().children) queue.push_back(c);
  }

  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const TreeNode& entry = tree.node(id);
    ++res.stats.entriesVisited;

    if (level >= 1 && pruneRule1(queryMbb, entry.mbb, params.eps)) {
      ++res.stats.ruleHits[1];
      res.stats.distanceCallsSaved += entry.leafCount;
      continue;
    }
    if (level >= 2 && pruneRule2(queryMbb, entry.mbb, params.eps)) {
      ++res.stats.ruleHits[2];
      res.stats.distanceCallsSaved += entry.leafCount;
      collectObjectsUnder(tree, id, neighbors);
      continue;
    }
    queryScratch.reset();
    if (level >= 3 && pruneRule3(queryTree, queryScratch, entry.mbb, params.eps, params.alpha)) {
      ++res.stats.ruleHits[3];
      res.stats.distanceCallsSaved += entry.leafCount;
      continue;
    }
    if (!entry.isLeaf()) {
      for (int c : entry.children) queue.push_back(c);
      continue;
    }

    const std::string& candId = tree.objectIdOfLeaf(id);
    if (candId == objectId) continue;  // the query object is always its own neighbor
    const LocalTree& candTree = tree.localTrees[entry.payload];
    candScratch.reset();
    if (level >= 4 &&
        pruneRule4(queryTree, queryScratch, candTree, candScratch, params.eps, params.alpha)) {
      ++res.stats.ruleHits[4];
      ++res.stats.distanceCallsSaved;
      continue;
    }
    const double d = alphaDistanceFiltered(queryTree, candTree, params.alpha, &queryScratch,
                                           &candScratch);
    ++res.stats.distanceCallsMade;
    if (d <= params.eps) neighbors.insert(candId);
  }

  res.ids.assign(neighbors.begin(), neighbors.end());
  return res;
}

}  // namespace mvo
