#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mvo/model.hpp"

namespace mvo {

struct SeedPoint {
  std::vector<double> coords;
  std::string label;
};

enum class ScatterKind { Uniform, Gaussian, InverseGaussian, MixtureGaussian };

// One draw inside the ball around `center`. Gaussian mass concentrates at the
// center, InverseGaussian at the rim, MixtureGaussian in two opposite lobes
// halfway out along `mixAxis` (a deterministic default axis when null).
// Every kind stays inside the radius.
std::vector<double> samplePointInBall(std::mt19937_64& rng, const std::vector<double>& center,
                                      double radius, ScatterKind kind,
                                      const std::vector<double>* mixAxis = nullptr);

struct MvoGenConfig {
  int kMin = 3;
  int kMax = 7;
  int instMin = 30;
  int instMax = 100;
  double domainLo = 0.0;
  double domainHi = 1000.0;
  uint64_t seed = 0;
  // per ground-truth label; labels missing here rotate through the four kinds
  // in first-appearance order
  std::map<std::string, ScatterKind> scatterByLabel;
};

// Blows each seed point up into a multi-valued object: instance count and the
// ball radius (distance to the k-th nearest seed) are drawn per object, the
// scatter shape is fixed per cluster, weights are drawn from a two-mode
// normal mixture (means 30 and 60, deviations 10 and 30, redrawn while tiny)
// and normalized. Finally all coordinates are rescaled into the domain.
Dataset generateMvoDataset(const std::vector<SeedPoint>& seeds, const MvoGenConfig& cfg);

struct ScaleGenConfig {
  int n = 2000;  // objects
  int m = 100;   // max instances per object
  int d = 2;     // dimensions
  uint64_t seed = 0;
};

// Four quadrant clusters over the first two dimensions: cell midpoints plus
// truncated Gaussian offsets for object centers, uniform in-ball instances,
// normal weights.
Dataset generateScaleDataset(const ScaleGenConfig& cfg);

// Fixed benchmark seed-point layouts, regenerated deterministically:
//   aggregation - 788 points, 7 blobs of varying size and spread
//   compound    - 399 points, hollow ring, nested blobs and a noise halo
//   jain        - 373 points, two crescents of very different density
//   twocircles  - 500 points, two rings and two blobs
std::vector<SeedPoint> builtinLayout(const std::string& name);
std::vector<std::string> builtinLayoutNames();

// Ground truth for a generated dataset (object id -> label).
std::map<std::string, std::string> truthOf(const Dataset& d);

}  // namespace mvo
