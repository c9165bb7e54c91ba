#pragma once

#include <map>
#include <string>

#include "mvo/cluster.hpp"

namespace mvo {

struct PairCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;
};

// Pair-counting contingency over objects with a ground-truth label other than
// "-1" (truth noise never enters a pair). Objects the prediction calls noise
// count as singleton clusters of their own.
PairCounts pairCounts(const ClusterLabeling& predicted,
                      const std::map<std::string, std::string>& truth);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Empty denominators resolve to 1 (nothing asserted, nothing wrong);
// f1 is 0 when precision + recall is 0.
PrecisionRecallF1 precisionRecallF1(const PairCounts& c);

// CSV with header id,label; "-1" marks truth noise.
void saveTruthCsv(const std::map<std::string, std::string>& truth,
                  const std::vector<std::string>& idOrder, const std::string& path);
std::map<std::string, std::string> loadTruthCsv(const std::string& path);

// Appends (or creates with header) a row: algorithm,dataset,precision,recall,f1,runtime_ms
void appendMetricsCsv(const std::string& path, const std::string& algorithm,
                      const std::string& dataset, const PrecisionRecallF1& m, double runtimeMs);

}  // namespace mvo
