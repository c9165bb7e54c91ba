#include "mvo/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace mvo {

const MultiValuedObject* Dataset::find(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

void Mbb::expand(const Mbb& other) {
  for (int k = 0; k < dims(); ++k) {
    if (other.lo[k] < lo[k]) lo[k] = other.lo[k];
    if (other.hi[k] > hi[k]) hi[k] = other.hi[k];
  }
}

std::vector<double> Mbb::center() const {
  std::vector<double> c(lo.size());
  for (size_t k = 0; k < lo.size(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

double euclideanDistance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("euclideanDistance: dimensionality mismatch");
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

Mbb mbbOf(const std::vector<Instance>& instances) {
  if (instances.empty()) throw std::invalid_argument("mbbOf: no instances");
  Mbb box{instances[0].coords, instances[0].coords};
  for (size_t i = 1; i < instances.size(); ++i) {
    const auto& c = instances[i].coords;
    if (c.size() != box.lo.size()) throw std::invalid_argument("mbbOf: ragged dimensionality");
    for (size_t k = 0; k < c.size(); ++k) {
      if (c[k] < box.lo[k]) box.lo[k] = c[k];
      if (c[k] > box.hi[k]) box.hi[k] = c[k];
    }
  }
  return box;
}

Mbb pointMbb(const std::vector<double>& coords) { return Mbb{coords, coords}; }

double dMin(const Mbb& a, const Mbb& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("dMin: dimensionality mismatch");
  double s = 0.0;
  for (int k = 0; k < a.dims(); ++k) {
    // per-axis gap, 0 when the projections overlap
    const double gap = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
    s += gap * gap;
  }
  return std::sqrt(s);
}

double dMax(const Mbb& a, const Mbb& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("dMax: dimensionality mismatch");
  double s = 0.0;
  for (int k = 0; k < a.dims(); ++k) {
    const double span = std::max(std::abs(a.hi[k] - b.lo[k]), std::abs(b.hi[k] - a.lo[k]));
    s += span * span;
  }
  return std::sqrt(s);
}

void validateObject(const MultiValuedObject& o, int dims) {
  if (o.id.empty()) throw std::invalid_argument("object with empty id");
  if (o.instances.empty()) throw std::invalid_argument("object '" + o.id + "' has no instances");
  double sum = 0.0;
  for (const auto& inst : o.instances) {
    if (static_cast<int>(inst.coords.size()) != dims)
      throw std::invalid_argument("object '" + o.id + "' has ragged dimensionality");
    if (!(inst.weight > 0.0) || inst.weight > 1.0)
      throw std::invalid_argument("object '" + o.id + "' has instance weight outside (0,1]");
    sum += inst.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("object '" + o.id + "' weights sum to " + std::to_string(sum) +
                                ", expected 1");
}

void validateDataset(const Dataset& d) {
  if (d.dims <= 0) throw std::invalid_argument("dataset dimensionality must be positive");
  std::set<std::string> seen;
  for (const auto& o : d.objects) {
    validateObject(o, d.dims);
    if (!seen.insert(o.id).second) throw std::invalid_argument("duplicate object id '" + o.id + "'");
  }
}

}  // namespace mvo
