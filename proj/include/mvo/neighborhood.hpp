#pragma once

#include <string>
#include <vector>

#include "mvo/distance.hpp"
#include "mvo/index.hpp"

namespace mvo {

// Cumulative pruning configurations: each level enables one more rule.
enum class PruningLevel { P0 = 0, P1 = 1, P12 = 2, P13 = 3, P14 = 4 };

PruningLevel parsePruningLevel(const std::string& s);  // "P0".."P1-4"
std::string pruningLevelName(PruningLevel level);

struct QueryParams {
  double alpha = 0.7;
  double eps = 0.0;
  PruningLevel pruning = PruningLevel::P14;
};

struct PruneStats {
  long long entriesVisited = 0;
  long long ruleHits[5] = {0, 0, 0, 0, 0};  // index by rule number, [0] unused
  long long distanceCallsMade = 0;
  long long distanceCallsSaved = 0;

  void add(const PruneStats& o);
};

// Rule 1: the entry cannot hold any neighbor when even the closest possible
// instance pair is at or beyond eps.
bool pruneRule1(const Mbb& queryMbb, const Mbb& entryMbb, double eps);

// Rule 2: every instance pair is within eps, so everything under the entry is
// a neighbor without any distance work.
bool pruneRule2(const Mbb& queryMbb, const Mbb& entryMbb, double eps);

// Rule 3: walks the query tree against the entry box, marking maximal query
// subtrees that sit wholly beyond eps. Returns true (prune the entry) once
// the marked weight exceeds 1 - alpha; otherwise the scratch is left holding
// the query tree trimmed for this entry.
bool pruneRule3(const LocalTree& queryTree, RemovalScratch& queryScratch, const Mbb& entryMbb,
                double eps, double alpha);

// Rule 4: same walk over the candidate's tree against the trimmed query box.
// Prunes when the surviving weight product cannot reach alpha; otherwise the
// candidate scratch holds the candidate's trim for the distance call.
bool pruneRule4(const LocalTree& queryTree, const RemovalScratch& queryScratch,
                const LocalTree& candTree, RemovalScratch& candScratch, double eps, double alpha);

struct NeighborhoodResult {
  std::vector<std::string> ids;  // sorted, always contains the query object
  PruneStats stats;
};

// Breadth-first walk of the global tree applying the enabled rules per entry;
// surviving leaves get the filtered distance on the trimmed trees. The id set
// is independent of the pruning level.
NeighborhoodResult getNeighborhood(const GlobalTree& tree, const std::string& objectId,
                                   const QueryParams& params);

}  // namespace mvo
