#include "mvo/eval.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/stat.h>
#include <vector>

namespace mvo {

PairCounts pairCounts(const ClusterLabeling& predicted,
                      const std::map<std::string, std::string>& truth) {
  struct Entry {
    const std::string* truthLabel;
    int predLabel;
  };
  std::vector<Entry> entries;
  entries.reserve(truth.size());
  int nextSingleton = -2;  // distinct ids for predicted-noise singletons
  for (const auto& [id, truthLabel] : truth) {
    if (truthLabel == "-1") continue;
    const auto it = predicted.label.find(id);
    if (it == predicted.label.end())
      throw std::invalid_argument("prediction misses object '" + id + "'");
    const int pred = it->second == kNoiseLabel ? nextSingleton-- : it->second;
    entries.push_back(Entry{&truthLabel, pred});
  }

  PairCounts c;
  for (size_t i = 0; i < entries.size(); ++i) {
    for (size_t j = i + 1; j < entries.size(); ++j) {
      const bool sameTruth = *entries[i].truthLabel == *entries[j].truthLabel;
      const bool samePred = entries[i].predLabel == entries[j].predLabel;
      if (samePred) {
        sameTruth ? ++c.tp : ++c.fp;
      } else {
        sameTruth ? ++c.fn : ++c.tn;
      }
    }
  }
  return c;
}

PrecisionRecallF1 precisionRecallF1(const PairCounts& c) {
  PrecisionRecallF1 m;
  m.precision = (c.tp + c.fp == 0) ? 1.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
  m.recall = (c.tp + c.fn == 0) ? 1.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
  m.f1 = (m.precision + m.recall == 0.0) ? 0.0
                                         : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

void saveTruthCsv(const std::map<std::string, std::string>& truth,
                  const std::vector<std::string>& idOrder, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  out << "id,label\n";
  for (const auto& id : idOrder) {
    const auto it = truth.find(id);
    if (it == truth.end()) throw std::invalid_argument("truth misses id '" + id + "'");
    out << id << "," << it->second << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, std::string> loadTruthCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,label", 0) != 0)
    throw std::runtime_error(path + ": expected header id,label");
  std::map<std::string, std::string> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return out;
}

void appendMetricsCsv(const std::string& path, const std::string& algorithm,
                      const std::string& dataset, const PrecisionRecallF1& m, double runtimeMs) {
  struct stat st;
  const bool fresh = stat(path.c_str(), &st) != 0 || st.st_size == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  if (fresh) out << "algorithm,dataset,precision,recall,f1,runtime_ms\n";
  out << algorithm << "," << dataset << "," << m.precision << "," << m.recall << "," << m.f1 << ","
      << runtimeMs << "\n";
}

}  // namespace mvo
