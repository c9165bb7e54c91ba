#include "mvo/distance.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mvo {

namespace {

void checkAlpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must be in (0,1], got " + std::to_string(alpha));
}

struct ScoredPair {
  double distance;
  int i;
  int j;
  double weight;
};

bool scoredLess(const ScoredPair& a, const ScoredPair& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

// Walks the sorted pairs until the cumulative weight reaches the target.
// Plain summation can fall a few ulps short of a target the exact sum would
// reach (alpha = 1 being the systematic case), so the scan settles on the
// last element instead of failing.
double quantileScan(const std::vector<ScoredPair>& sorted, double target) {
  double cum = 0.0;
  for (const auto& sp : sorted) {
    cum += sp.weight;
    if (cum >= target) return sp.distance;
  }
  return sorted.back().distance;
}

}  // namespace

double alphaDistanceBruteForce(const MultiValuedObject& p, const MultiValuedObject& q,
                               double alpha) {
  checkAlpha(alpha);
  if (p.instances.empty() || q.instances.empty())
    throw std::invalid_argument("alphaDistanceBruteForce: object without instances");
  std::vector<ScoredPair> pairs;
  pairs.reserve(p.instances.size() * q.instances.size());
  for (size_t i = 0; i < p.instances.size(); ++i) {
    for (size_t j = 0; j < q.instances.size(); ++j) {
      pairs.push_back(ScoredPair{euclideanDistance(p.instances[i].coords, q.instances[j].coords),
                                 static_cast<int>(i), static_cast<int>(j),
                                 p.instances[i].weight * q.instances[j].weight});
    }
  }
  std::sort(pairs.begin(), pairs.end(), scoredLess);
  return quantileScan(pairs, alpha);
}

LowerBoundUpdate updateLowerBound(const std::vector<EntryPair>& pairs, double prevLower,
                                  double alpha) {
  checkAlpha(alpha);
  LowerBoundUpdate out;
  out.newLower = prevLower;
  out.survivors.reserve(pairs.size());
  for (const auto& pr : pairs) {
    if (pr.dMin < prevLower) {
      out.prunedWeight += pr.weight;
    } else {
      out.survivors.push_back(pr);
    }
  }
  const double target = alpha - out.prunedWeight;
  if (target <= 0.0 || out.survivors.empty()) return out;  // previous bound stands
  std::vector<const EntryPair*> byMin;
  byMin.reserve(out.survivors.size());
  for (const auto& pr : out.survivors) byMin.push_back(&pr);
  std::stable_sort(byMin.begin(), byMin.end(),
                   [](const EntryPair* a, const EntryPair* b) { return a->dMin < b->dMin; });
  double cum = 0.0;
  for (const EntryPair* pr : byMin) {
    cum += pr->weight;
    if (cum >= target) {
      out.newLower = pr->dMin;
      return out;
    }
  }
  out.newLower = byMin.back()->dMin;  // summation shortfall, take the last
  return out;
}

double updateUpperBound(const std::vector<EntryPair>& pairs, double prevUpper, double alpha) {
  checkAlpha(alpha);
  std::vector<const EntryPair*> kept;
  kept.reserve(pairs.size());
  double keptWeight = 0.0;
  for (const auto& pr : pairs) {
    if (pr.dMax <= prevUpper) {
      kept.push_back(&pr);
      keptWeight += pr.weight;
    }
  }
  if (kept.empty() || keptWeight < alpha - 1e-6)
    throw std::logic_error("updateUpperBound: discarded pairs would carry the quantile");
  std::stable_sort(kept.begin(), kept.end(),
                   [](const EntryPair* a, const EntryPair* b) { return a->dMax < b->dMax; });
  double cum = 0.0;
  for (const EntryPair* pr : kept) {
    cum += pr->weight;
    if (cum >= alpha) return pr->dMax;
  }
  return kept.back()->dMax;
}

namespace {

struct PairExpander {
  const LocalTree& p;
  const LocalTree& q;
  const RemovalScratch* ps;
  const RemovalScratch* qs;
  long long leafPairsCreated = 0;
  double scratchSkipped = 0.0;

  EntryPair make(int aId, int bId) {
    const TreeNode& a = p.node(aId);
    const TreeNode& b = q.node(bId);
    EntryPair pr;
    pr.aId = aId;
    pr.bId = bId;
    pr.weight = a.weight * b.weight;
    pr.dMin = dMin(a.mbb, b.mbb);
    pr.dMax = dMax(a.mbb, b.mbb);
    pr.leafLeaf = a.isLeaf() && b.isLeaf();
    if (pr.leafLeaf) ++leafPairsCreated;
    return pr;
  }

  // One tree level deeper on every non-leaf side. Leaf-leaf pairs pass
  // through unchanged. Weight lost to scratch-removed children is recorded
  // so level bookkeeping still closes.
  void expandInto(const EntryPair& pr, std::vector<EntryPair>& out) {
    if (pr.leafLeaf) {
      out.push_back(pr);
      return;
    }
    const TreeNode& a = p.node(pr.aId);
    const TreeNode& b = q.node(pr.bId);
    std::vector<int> aKids = a.isLeaf() ? std::vector<int>{pr.aId} : p.childEntries(pr.aId, ps);
    std::vector<int> bKids = b.isLeaf() ? std::vector<int>{pr.bId} : q.childEntries(pr.bId, qs);
    double crossWeight = 0.0;
    for (int ak : aKids) {
      for (int bk : bKids) {
        EntryPair child = make(ak, bk);
        crossWeight += child.weight;
        out.push_back(std::move(child));
      }
    }
    scratchSkipped += pr.weight - crossWeight;
  }
};

bool allLeafPairs(const std::vector<EntryPair>& pairs) {
  for (const auto& pr : pairs) {
    if (!pr.leafLeaf) return false;
  }
  return true;
}

}  // namespace

double alphaDistanceFiltered(const LocalTree& p, const LocalTree& q, double alpha,
                             const RemovalScratch* pScratch, const RemovalScratch* qScratch,
                             FilterTrace* trace) {
  checkAlpha(alpha);
  PairExpander ex{p, q, pScratch, qScratch};

  double lower = dMin(p.root().mbb, q.root().mbb);
  double upper = dMax(p.root().mbb, q.root().mbb);
  double alphaResidual = alpha;
  double thetaCum = 0.0;
  double upperDroppedCum = 0.0;

  std::vector<EntryPair> entryPairs;
  ex.expandInto(ex.make(p.rootId(), q.rootId()), entryPairs);

  std::vector<EntryPair> candidates;
  do {
    candidates.clear();
    for (const auto& pr : entryPairs) ex.expandInto(pr, candidates);

    // Settled weight can only reach alpha exactly at the quantile pair, so a
    // non-positive residual is summation drift; bounds are moot from here on.
    if (alphaResidual <= 0.0) {
      entryPairs = std::move(candidates);
      continue;
    }

    LowerBoundUpdate lb = updateLowerBound(candidates, lower, alphaResidual);
    const double newUpper = updateUpperBound(candidates, upper, alphaResidual);
    if (lb.newLower < lower || newUpper > upper)
      throw std::logic_error("alphaDistanceFiltered: bound moved the wrong way");
    lower = lb.newLower;
    upper = newUpper;
    if (lower > upper) throw std::logic_error("alphaDistanceFiltered: bounds crossed");

    double theta = 0.0;
    double survivorWeight = 0.0;
    std::vector<EntryPair> survivors;
    survivors.reserve(candidates.size());
    for (auto& pr : candidates) {
      if (pr.dMin > upper) {
        upperDroppedCum += pr.weight;
      } else if (pr.dMax < lower) {
        theta += pr.weight;
      } else {
        survivorWeight += pr.weight;
        survivors.push_back(std::move(pr));
      }
    }
    alphaResidual -= theta;
    thetaCum += theta;
    entryPairs = std::move(survivors);
    if (entryPairs.empty())
      throw std::logic_error("alphaDistanceFiltered: no surviving entry pairs");
    if (trace != nullptr)
      trace->levels.push_back(FilterTrace::Level{lower, upper, alphaResidual, survivorWeight,
                                                 thetaCum, upperDroppedCum, ex.scratchSkipped});
  } while (!allLeafPairs(entryPairs));

  std::vector<ScoredPair> refined;
  refined.reserve(entryPairs.size());
  for (const auto& pr : entryPairs) {
    refined.push_back(ScoredPair{pr.dMin, p.node(pr.aId).payload, q.node(pr.bId).payload,
                                 pr.weight});
  }
  std::sort(refined.begin(), refined.end(), scoredLess);
  if (trace != nullptr) trace->leafPairsCreated = ex.leafPairsCreated;
  return quantileScan(refined, alphaResidual);
}

bool isAlphaNeighbor(const LocalTree& p, const LocalTree& q, double alpha, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return alphaDistanceFiltered(p, q, alpha) <= eps;
}

}  // namespace mvo
