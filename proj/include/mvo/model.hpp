#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvo {

// One weighted observation of a multi-valued object.
struct Instance {
  std::vector<double> coords;
  double weight = 0.0;
};

struct MultiValuedObject {
  std::string id;
  std::vector<Instance> instances;
  std::string label;  // optional ground-truth tag; empty means absent
};

struct Dataset {
  int dims = 0;
  std::vector<MultiValuedObject> objects;

  const MultiValuedObject* find(const std::string& id) const;
};

// Axis-aligned minimum bounding box. A single point is a degenerate box (lo == hi).
struct Mbb {
  std::vector<double> lo;
  std::vector<double> hi;

  int dims() const { return static_cast<int>(lo.size()); }
  void expand(const Mbb& other);
  std::vector<double> center() const;
};

double euclideanDistance(const std::vector<double>& a, const std::vector<double>& b);

Mbb mbbOf(const std::vector<Instance>& instances);
Mbb pointMbb(const std::vector<double>& coords);

// Smallest / largest possible distance between a point of one box and a point of the other.
// dMin is 0 when the boxes overlap; for degenerate boxes both collapse to the point distance.
double dMin(const Mbb& a, const Mbb& b);
double dMax(const Mbb& a, const Mbb& b);

// Throws std::invalid_argument when the object violates the model contract:
// no instances, ragged dimensionality, weight outside (0,1], or weight sum off 1 by more than 1e-9.
void validateObject(const MultiValuedObject& o, int dims);
void validateDataset(const Dataset& d);

// Line-delimited records, one JSON object per line:
//   {"id":"...","instances":[{"coords":[..],"weight":..},...],"label":"..."}
// label is optional. Weight sums within 1e-6 of 1 are renormalized, worse is an error.
Dataset loadDataset(const std::string& path);
Dataset parseDataset(std::istream& in, const std::string& originName);
void saveDataset(const Dataset& d, const std::string& path);

}  // namespace mvo
