#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mvo/model.hpp"

namespace mvo {

using nlohmann::json;

static Instance parseInstance(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("coords") || !j.contains("weight"))
    throw std::runtime_error(where + ": instance needs coords and weight");
  Instance inst;
  for (const auto& v : j.at("coords")) {
    if (!v.is_number()) throw std::runtime_error(where + ": non-numeric coordinate");
    inst.coords.push_back(v.get<double>());
  }
  if (inst.coords.empty()) throw std::runtime_error(where + ": empty coords");
  if (!j.at("weight").is_number()) throw std::runtime_error(where + ": non-numeric weight");
  inst.weight = j.at("weight").get<double>();
  return inst;
}

Dataset parseDataset(std::istream& in, const std::string& originName) {
  Dataset d;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = originName + ":" + std::to_string(lineNo);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("instances"))
      throw std::runtime_error(where + ": record needs id and instances");
    MultiValuedObject o;
    o.id = j.at("id").get<std::string>();
    if (j.contains("label")) {
      const auto& lab = j.at("label");
      o.label = lab.is_string() ? lab.get<std::string>() : lab.dump();
    }
    for (const auto& ji : j.at("instances")) o.instances.push_back(parseInstance(ji, where));
    if (o.instances.empty()) throw std::runtime_error(where + ": object has no instances");

    if (d.objects.empty()) d.dims = static_cast<int>(o.instances[0].coords.size());
    double sum = 0.0;
    for (const auto& inst : o.instances) {
      if (static_cast<int>(inst.coords.size()) != d.dims)
        throw std::runtime_error(where + ": ragged dimensionality");
      if (!(inst.weight > 0.0)) throw std::runtime_error(where + ": instance weight must be > 0");
      sum += inst.weight;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::runtime_error(where + ": weights sum to " + std::to_string(sum));
    // small drift from serialization is repaired; sums already inside the model
    // tolerance pass through untouched so reload round-trips bit for bit
    if (std::abs(sum - 1.0) > 1e-9) {
      for (auto& inst : o.instances) inst.weight /= sum;
    }
    d.objects.push_back(std::move(o));
  }
  validateDataset(d);
  return d;
}

Dataset loadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parseDataset(in, path);
}

void saveDataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& o : d.objects) {
    json j;
    j["id"] = o.id;
    if (!o.label.empty()) j["label"] = o.label;
    json insts = json::array();
    for (const auto& inst : o.instances) {
      insts.push_back({{"coords", inst.coords}, {"weight", inst.weight}});
    }
    j["instances"] = std::move(insts);
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mvo
