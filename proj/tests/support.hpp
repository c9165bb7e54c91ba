// Shared fixtures and reference implementations used across the test binaries.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mvo/cluster.hpp"
#include "mvo/distance.hpp"
#include "mvo/model.hpp"

namespace support {

inline mvo::MultiValuedObject makeObject(
    const std::string& id, const std::vector<std::vector<double>>& coords,
    const std::vector<double>& weights) {
  mvo::MultiValuedObject o;
  o.id = id;
  for (size_t i = 0; i < coords.size(); ++i) o.instances.push_back({coords[i], weights[i]});
  return o;
}

// two check-in users: one with 3 weighted locations, one with 6
inline mvo::Dataset checkinPair() {
  mvo::Dataset d;
  d.dims = 2;
  d.objects.push_back(makeObject(
      "paul", {{33.56, 37.19}, {40.44, 36.72}, {34.18, 48.10}}, {0.24, 0.33, 0.43}));
  d.objects.push_back(makeObject("qiana",
                                 {{54.05, 67.36},
                                  {45.53, 57.92},
                                  {42.14, 47.27},
                                  {45.90, 42.80},
                                  {49.96, 48.92},
                                  {62.84, 58.93}},
                                 {0.24, 0.10, 0.17, 0.19, 0.08, 0.22}));
  return d;
}

inline mvo::MultiValuedObject randomObject(std::mt19937_64& rng, const std::string& id, int dims,
                                           int instMin, int instMax, double boxLo = 0.0,
                                           double boxHi = 100.0, double spread = 8.0) {
  std::uniform_real_distribution<double> coordOf(boxLo, boxHi);
  std::uniform_real_distribution<double> offsetOf(-spread, spread);
  std::uniform_real_distribution<double> weightOf(0.05, 1.0);
  std::uniform_int_distribution<int> countOf(instMin, instMax);

  std::vector<double> center(dims);
  for (auto& c : center) c = coordOf(rng);
  const int count = countOf(rng);

  mvo::MultiValuedObject o;
  o.id = id;
  o.instances.resize(count);
  double sum = 0.0;
  for (auto& inst : o.instances) {
    inst.coords.resize(dims);
    for (int k = 0; k < dims; ++k) inst.coords[k] = center[k] + offsetOf(rng);
    inst.weight = weightOf(rng);
    sum += inst.weight;
  }
  for (auto& inst : o.instances) inst.weight /= sum;
  return o;
}

inline mvo::Dataset randomDataset(std::mt19937_64& rng, int n, int dims, int instMin, int instMax,
                                  double boxLo = 0.0, double boxHi = 100.0, double spread = 8.0) {
  mvo::Dataset d;
  d.dims = dims;
  for (int i = 0; i < n; ++i) {
    d.objects.push_back(
        randomObject(rng, "obj" + std::to_string(i), dims, instMin, instMax, boxLo, boxHi, spread));
  }
  return d;
}

// neighborhood reference: exhaustive quantile distances, self always included
inline std::vector<std::string> bruteForceNeighborhood(const mvo::Dataset& d,
                                                       const std::string& objectId, double alpha,
                                                       double eps) {
  const mvo::MultiValuedObject* self = d.find(objectId);
  std::vector<std::string> out;
  for (const auto& o : d.objects) {
    if (o.id == objectId || mvo::alphaDistanceBruteForce(*self, o, alpha) <= eps)
      out.push_back(o.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Density-expansion reference with a different shape than the library's
// queue-based pass: cores are flood-filled over the core-core neighbor graph
// in scan order, then each border object joins the lowest-numbered cluster
// among its core neighbors. Equivalent when neighborsOf is deterministic.
inline mvo::ClusterLabeling dbscanReference(
    const std::vector<std::string>& idsInScanOrder, int minObs,
    const std::function<std::vector<std::string>(const std::string&)>& neighborsOf) {
  std::map<std::string, std::vector<std::string>> nbr;
  mvo::ClusterLabeling out;
  for (const auto& id : idsInScanOrder) {
    nbr[id] = neighborsOf(id);
    out.core[id] = static_cast<int>(nbr[id].size()) >= minObs;
    out.label[id] = mvo::kNoiseLabel;
  }
  for (const auto& id : idsInScanOrder) {
    if (!out.core[id] || out.label[id] != mvo::kNoiseLabel) continue;
    const int cid = out.clusterCount++;
    std::vector<std::string> stack{id};
    out.label[id] = cid;
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      for (const auto& t : nbr[cur]) {
        if (out.core[t] && out.label[t] == mvo::kNoiseLabel) {
          out.label[t] = cid;
          stack.push_back(t);
        }
      }
    }
  }
  for (const auto& id : idsInScanOrder) {
    if (out.core[id]) continue;
    int best = mvo::kNoiseLabel;
    for (const auto& t : nbr[id]) {
      if (t != id && out.core[t] && (best == mvo::kNoiseLabel || out.label[t] < best))
        best = out.label[t];
    }
    out.label[id] = best;
  }
  return out;
}

}  // namespace support
