#pragma once

#include <vector>

#include "mvo/index.hpp"
#include "mvo/model.hpp"

namespace mvo {

// Pair of entries, one from each object's tree. Weight is the product of the
// node weights; dMin/dMax collapse to the instance distance for leaf-leaf pairs.
struct EntryPair {
  int aId = -1;
  int bId = -1;
  double weight = 0.0;
  double dMin = 0.0;
  double dMax = 0.0;
  bool leafLeaf = false;
};

// Reference implementation: sort all instance-pair distances, walk the
// cumulative weight until it reaches alpha. Ties resolve by (distance,
// first object's instance index, second object's instance index).
double alphaDistanceBruteForce(const MultiValuedObject& p, const MultiValuedObject& q, double alpha);

struct LowerBoundUpdate {
  double newLower = 0.0;
  double prunedWeight = 0.0;  // weight of pairs dropped for dMin < prevLower
  std::vector<EntryPair> survivors;
};

// Quantile of dMin over pairs at or above the previous bound; pairs below it
// only shrink the scan target. When the dropped weight already covers alpha
// the previous bound is kept.
LowerBoundUpdate updateLowerBound(const std::vector<EntryPair>& pairs, double prevLower,
                                  double alpha);

// Quantile of dMax after discarding pairs beyond the previous bound. The
// discarded pairs cannot carry the quantile, so the scan always reaches alpha;
// a shortfall beyond rounding noise means the caller fed garbage and throws.
double updateUpperBound(const std::vector<EntryPair>& pairs, double prevUpper, double alpha);

// Optional per-call instrumentation for the filtered distance.
struct FilterTrace {
  struct Level {
    double lower = 0.0;
    double upper = 0.0;
    double alphaResidual = 0.0;
    double survivorWeight = 0.0;
    double thetaCum = 0.0;         // weight settled below the lower bound so far
    double upperDroppedCum = 0.0;  // weight discarded above the upper bound so far
    double scratchSkippedCum = 0.0;
  };
  std::vector<Level> levels;
  long long leafPairsCreated = 0;
};

// Filter-and-refine alpha distance over the two local trees. Descends both
// trees level by level, keeps a lower/upper bound sandwich on the result,
// discards entry pairs wholly above the upper bound, and settles pairs wholly
// below the lower bound by shrinking the remaining alpha target. Optional
// scratches restrict each tree to its surviving subtrees. Agrees with
// alphaDistanceBruteForce exactly on untrimmed trees.
double alphaDistanceFiltered(const LocalTree& p, const LocalTree& q, double alpha,
                             const RemovalScratch* pScratch = nullptr,
                             const RemovalScratch* qScratch = nullptr,
                             FilterTrace* trace = nullptr);

bool isAlphaNeighbor(const LocalTree& p, const LocalTree& q, double alpha, double eps);

}  // namespace mvo
