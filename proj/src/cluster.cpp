#include "mvo/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "mvo/distance.hpp"
#include "mvo/index.hpp"

namespace mvo {

namespace {

constexpr int kUnclassified = -2;

double millisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> sortedIds(const Dataset& d) {
  std::vector<std::string> ids;
  ids.reserve(d.objects.size());
  for (const auto& o : d.objects) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

int ClusterLabeling::noiseCount() const {
  int n = 0;
  for (const auto& [id, lab] : label) {
    if (lab == kNoiseLabel) ++n;
  }
  return n;
}

ClusterLabeling expandClusters(
    const std::vector<std::string>& idsInScanOrder, int minObs,
    const std::function<std::vector<std::string>(const std::string&)>& neighborsOf) {
  if (minObs < 1) throw std::invalid_argument("minObs must be at least 1");
  std::unordered_map<std::string, int> state;
  state.reserve(idsInScanOrder.size());
  for (const auto& id : idsInScanOrder) state[id] = kUnclassified;

  ClusterLabeling out;
  for (const auto& id : idsInScanOrder) out.core[id] = false;

  for (const auto& seedId : idsInScanOrder) {
    if (state[seedId] != kUnclassified) continue;
    const auto seedNeighbors = neighborsOf(seedId);
    if (static_cast<int>(seedNeighbors.size()) < minObs) {
      state[seedId] = kNoiseLabel;
      continue;
    }
    const int cid = out.clusterCount++;
    out.core[seedId] = true;
    std::deque<std::string> queue;
    for (const auto& x : seedNeighbors) {
      auto& st = state[x];
      if (st == kUnclassified || st == kNoiseLabel) st = cid;
      queue.push_back(x);  // members of other clusters are borders there, dequeuing is a no-op
    }
    while (!queue.empty()) {
      const std::string cur = std::move(queue.front());
      queue.pop_front();
      const auto curNeighbors = neighborsOf(cur);
      if (static_cast<int>(curNeighbors.size()) < minObs) continue;
      out.core[cur] = true;
      for (const auto& t : curNeighbors) {
        auto& st = state[t];
        if (st == kUnclassified) {
          st = cid;
          queue.push_back(t);
        } else if (st == kNoiseLabel) {
          st = cid;  // noise becomes a border of the first cluster that reaches it
        }
      }
    }
  }
  for (auto& [id, st] : state) out.label[id] = st;
  return out;
}

ClusterRun dbcmo(const Dataset& d, const ClusterParams& params) {
  ClusterRun run;
  auto t0 = std::chrono::steady_clock::now();
  const GlobalTree tree = buildGlobalTree(d, params.maxFanout);
  run.treeBuildMillis = millisSince(t0);

  t0 = std::chrono::steady_clock::now();
  const auto neighborsOf = [&](const std::string& id) {
    auto res = getNeighborhood(tree, id, params.query);
    run.stats.add(res.stats);
    return std::move(res.ids);
  };
  run.labeling = expandClusters(sortedIds(d), params.minObs, neighborsOf);
  run.clusterMillis = millisSince(t0);
  return run;
}

std::vector<double> aggregateObject(const MultiValuedObject& o) {
  if (o.instances.empty()) throw std::invalid_argument("aggregateObject: no instances");
  std::vector<double> mean(o.instances[0].coords.size(), 0.0);
  for (const auto& inst : o.instances) {
    for (size_t k = 0; k < mean.size(); ++k) mean[k] += inst.weight * inst.coords[k];
  }
  return mean;
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Weighted pick by inverse CDF over the running weight sum; avoids the
// implementation-defined std::discrete_distribution.
size_t weightedPick(std::mt19937_64& rng, const std::vector<double>& cumWeights) {
  const double total = cumWeights.back();
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  const auto it = std::upper_bound(cumWeights.begin(), cumWeights.end(), u);
  return std::min<size_t>(it - cumWeights.begin(), cumWeights.size() - 1);
}

}  // namespace

ClusterRun fdbscan(const Dataset& d, int minObs, double eps, const BaselineParams& bp) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (bp.sampleCount < 1) throw std::invalid_argument("sampleCount must be at least 1");
  if (!(bp.reachabilityProbability > 0.0) || bp.reachabilityProbability > 1.0)
    throw std::invalid_argument("reachabilityProbability must be in (0,1]");
  validateDataset(d);

  ClusterRun run;
  auto t0 = std::chrono::steady_clock::now();
  // aggregation step: fixed per-object sample sets, seeded per object id so
  // the draw does not depend on dataset file order
  std::unordered_map<std::string, std::vector<std::vector<double>>> samples;
  samples.reserve(d.objects.size());
  for (const auto& o : d.objects) {
    std::seed_seq seq{static_cast<uint64_t>(bp.seed), fnv1a(o.id)};
    std::mt19937_64 rng(seq);
    std::vector<double> cum;
    cum.reserve(o.instances.size());
    double s = 0.0;
    for (const auto& inst : o.instances) {
      s += inst.weight;
      cum.push_back(s);
    }
    auto& dst = samples[o.id];
    dst.reserve(bp.sampleCount);
    for (int i = 0; i < bp.sampleCount; ++i) dst.push_back(o.instances[weightedPick(rng, cum)].coords);
  }
  run.treeBuildMillis = millisSince(t0);

  t0 = std::chrono::steady_clock::now();
  const double need = bp.reachabilityProbability;
  const auto reachable = [&](const std::vector<std::vector<double>>& a,
                             const std::vector<std::vector<double>>& b) {
    int within = 0;
    for (const auto& x : a) {
      for (const auto& y : b) {
        if (euclideanDistance(x, y) <= eps) ++within;
      }
    }
    const double frac = static_cast<double>(within) / (static_cast<double>(a.size()) * b.size());
    return frac >= need;
  };
  const auto ids = sortedIds(d);
  const auto neighborsOf = [&](const std::string& id) {
    const auto& mine = samples.at(id);
    std::vector<std::string> out;
    for (const auto& other : ids) {
      if (other == id || reachable(mine, samples.at(other))) out.push_back(other);
    }
    return out;
  };
  run.labeling = expandClusters(ids, minObs, neighborsOf);
  run.clusterMillis = millisSince(t0);
  return run;
}

ClusterRun expdbscan(const Dataset& d, int minObs, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  validateDataset(d);

  ClusterRun run;
  auto t0 = std::chrono::steady_clock::now();
  std::unordered_map<std::string, std::vector<double>> means;
  means.reserve(d.objects.size());
  for (const auto& o : d.objects) means[o.id] = aggregateObject(o);
  run.treeBuildMillis = millisSince(t0);

  t0 = std::chrono::steady_clock::now();
  const auto ids = sortedIds(d);
  const auto neighborsOf = [&](const std::string& id) {
    const auto& mine = means.at(id);
    std::vector<std::string> out;
    for (const auto& other : ids) {
      if (other == id || euclideanDistance(mine, means.at(other)) <= eps) out.push_back(other);
    }
    return out;
  };
  run.labeling = expandClusters(ids, minObs, neighborsOf);
  run.clusterMillis = millisSince(t0);
  return run;
}

void saveLabelingCsv(const ClusterLabeling& labeling, const std::vector<std::string>& idOrder,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  out << "id,label,core\n";
  for (const auto& id : idOrder) {
    const auto it = labeling.label.find(id);
    if (it == labeling.label.end()) throw std::invalid_argument("labeling misses id '" + id + "'");
    out << id << "," << it->second << "," << (labeling.core.at(id) ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ClusterLabeling loadLabelingCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,label,core", 0) != 0)
    throw std::runtime_error(path + ": expected header id,label,core");
  ClusterLabeling out;
  int maxLabel = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id, lab, core;
    if (!std::getline(row, id, ',') || !std::getline(row, lab, ',') || !std::getline(row, core))
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    out.label[id] = std::stoi(lab);
    out.core[id] = core == "1";
    maxLabel = std::max(maxLabel, out.label[id]);
  }
  out.clusterCount = maxLabel + 1;
  return out;
}

std::vector<std::pair<std::string, double>> kDistanceProfile(const Dataset& d, int k, double alpha,
                                                             int workers) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (static_cast<size_t>(k) >= d.objects.size())
    throw std::invalid_argument("k must be smaller than the object count");
  const GlobalTree tree = buildGlobalTree(d);
  const int n = static_cast<int>(d.objects.size());
  std::vector<double> kdist(n, 0.0);

  const auto worker = [&](int begin, int end) {
    std::vector<double> dists;
    dists.reserve(n - 1);
    for (int i = begin; i < end; ++i) {
      dists.clear();
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        dists.push_back(
            alphaDistanceFiltered(tree.localTrees[i], tree.localTrees[j], alpha));
      }
      std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
      kdist[i] = dists[k - 1];
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      if (begin >= n) break;
      pool.emplace_back(worker, begin, std::min(begin + chunk, n));
    }
    for (auto& t : pool) t.join();
  }

  std::vector<std::pair<std::string, double>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.emplace_back(d.objects[i].id, kdist[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

double epsAtQuantile(const std::vector<std::pair<std::string, double>>& profile, double quantile) {
  if (profile.empty()) throw std::invalid_argument("empty k-distance profile");
  if (!(quantile >= 0.0) || quantile > 1.0) throw std::invalid_argument("quantile must be in [0,1]");
  // profile is sorted descending; index from the ascending end
  const size_t n = profile.size();
  const size_t pos = static_cast<size_t>(quantile * (n - 1) + 0.5);
  return profile[n - 1 - pos].second;
}

}  // namespace mvo
