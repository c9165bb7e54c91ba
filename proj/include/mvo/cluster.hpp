#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mvo/model.hpp"
#include "mvo/neighborhood.hpp"

namespace mvo {

constexpr int kNoiseLabel = -1;

struct ClusterLabeling {
  std::map<std::string, int> label;  // cluster id from 0 in discovery order, -1 noise
  std::map<std::string, bool> core;
  int clusterCount = 0;

  int noiseCount() const;
};

struct ClusterRun {
  ClusterLabeling labeling;
  PruneStats stats;  // aggregated over every neighborhood query (dbcmo only)
  double treeBuildMillis = 0.0;
  double clusterMillis = 0.0;
};

struct ClusterParams {
  int minObs = 5;
  QueryParams query;  // alpha, eps, pruning level
  int maxFanout = 8;
};

// Density clustering over alpha-approximation neighborhoods. Objects are
// scanned in id order and neighbor sets are fetched fresh for every examined
// object, so the result does not depend on dataset file order.
ClusterRun dbcmo(const Dataset& d, const ClusterParams& params);

struct BaselineParams {
  int sampleCount = 20;
  double reachabilityProbability = 0.7;
  uint64_t seed = 0;
};

// Sampling baseline: draws sampleCount instances per object by weighted
// sampling with replacement, then connects objects whose fraction of sample
// pairs within eps reaches reachabilityProbability.
ClusterRun fdbscan(const Dataset& d, int minObs, double eps, const BaselineParams& bp);

// Aggregation baseline: collapses each object to its weighted mean and runs
// plain density clustering on the points.
ClusterRun expdbscan(const Dataset& d, int minObs, double eps);

// Weighted mean of an object's instances.
std::vector<double> aggregateObject(const MultiValuedObject& o);

// Shared expansion skeleton; neighbor sets must be sorted and self-inclusive.
ClusterLabeling expandClusters(const std::vector<std::string>& idsInScanOrder, int minObs,
                               const std::function<std::vector<std::string>(const std::string&)>& neighborsOf);

// CSV with header id,label,core; rows follow idOrder.
void saveLabelingCsv(const ClusterLabeling& labeling, const std::vector<std::string>& idOrder,
                     const std::string& path);
ClusterLabeling loadLabelingCsv(const std::string& path);

// For each object, the alpha-distance to its k-th nearest other object,
// sorted descending. Brute force over object pairs.
std::vector<std::pair<std::string, double>> kDistanceProfile(const Dataset& d, int k, double alpha,
                                                             int workers = 1);

// Eps pick off the profile: value at `quantile` of the ascending curve.
double epsAtQuantile(const std::vector<std::pair<std::string, double>>& profile, double quantile);

}  // namespace mvo
