#include "mvo/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mvo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double normal(std::mt19937_64& rng, double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(rng);
}

int uniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> randomUnit(std::mt19937_64& rng, int dims) {
  std::vector<double> v(dims);
  while (true) {
    double norm2 = 0.0;
    for (auto& x : v) {
      x = normal(rng, 0.0, 1.0);
      norm2 += x * x;
    }
    if (norm2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

double norm2Of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::vector<double> samplePointInBall(std::mt19937_64& rng, const std::vector<double>& center,
                                      double radius, ScatterKind kind,
                                      const std::vector<double>* mixAxis) {
  const int dims = static_cast<int>(center.size());
  if (!(radius > 0.0)) throw std::invalid_argument("sample radius must be positive");
  std::vector<double> offset(dims);
  switch (kind) {
    case ScatterKind::Uniform: {
      offset = randomUnit(rng, dims);
      const double r = radius * std::pow(uniform01(rng), 1.0 / dims);
      for (auto& x : offset) x *= r;
      break;
    }
    case ScatterKind::Gaussian: {
      // centered, truncated to the ball
      const double sd = radius / 3.0;
      do {
        for (auto& x : offset) x = normal(rng, 0.0, sd);
      } while (norm2Of(offset) > radius * radius);
      break;
    }
    case ScatterKind::InverseGaussian: {
      // radius grows as the Gaussian magnitude shrinks: mass piles up at the rim
      double g;
      do {
        g = std::abs(normal(rng, 0.0, 1.0));
      } while (g > 3.0);
      const double r = radius * (1.0 - g / 3.0);
      offset = randomUnit(rng, dims);
      for (auto& x : offset) x *= r;
      break;
    }
    case ScatterKind::MixtureGaussian: {
      // two equal lobes halfway out in opposite directions along the axis
      std::vector<double> axis = mixAxis != nullptr ? *mixAxis : std::vector<double>();
      if (axis.empty()) {
        axis.assign(dims, 0.0);
        axis[0] = 1.0;
      }
      const double sd = radius / 4.0;
      const double side = uniform01(rng) < 0.5 ? 0.5 : -0.5;
      do {
        for (int k = 0; k < dims; ++k) offset[k] = side * radius * axis[k] + normal(rng, 0.0, sd);
      } while (norm2Of(offset) > radius * radius);
      break;
    }
  }
  std::vector<double> out(dims);
  for (int k = 0; k < dims; ++k) out[k] = center[k] + offset[k];
  return out;
}

namespace {

std::string paddedId(int index, int width) {
  std::ostringstream s;
  s << "o";
  std::string digits = std::to_string(index);
  for (int i = static_cast<int>(digits.size()); i < width; ++i) s << '0';
  s << digits;
  return s.str();
}

int idWidth(size_t count) {
  int w = 1;
  for (size_t v = count > 0 ? count - 1 : 0; v >= 10; v /= 10) ++w;
  return std::max(w, 4);
}

std::vector<double> drawWeights(std::mt19937_64& rng, int count) {
  std::vector<double> w(count);
  double sum = 0.0;
  for (auto& x : w) {
    do {
      x = uniform01(rng) < 0.5 ? normal(rng, 30.0, 10.0) : normal(rng, 60.0, 30.0);
    } while (x < 0.01);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

void rescaleToDomain(Dataset& d, double lo, double hi) {
  if (d.objects.empty()) return;
  std::vector<double> cloudLo(d.dims, 0.0), cloudHi(d.dims, 0.0);
  bool first = true;
  for (const auto& o : d.objects) {
    for (const auto& inst : o.instances) {
      for (int k = 0; k < d.dims; ++k) {
        if (first || inst.coords[k] < cloudLo[k]) cloudLo[k] = inst.coords[k];
        if (first || inst.coords[k] > cloudHi[k]) cloudHi[k] = inst.coords[k];
      }
      first = false;
    }
  }
  for (auto& o : d.objects) {
    for (auto& inst : o.instances) {
      for (int k = 0; k < d.dims; ++k) {
        const double extent = cloudHi[k] - cloudLo[k];
        inst.coords[k] = extent > 0.0
                             ? lo + (inst.coords[k] - cloudLo[k]) / extent * (hi - lo)
                             : 0.5 * (lo + hi);
      }
    }
  }
}

}  // namespace

Dataset generateMvoDataset(const std::vector<SeedPoint>& seeds, const MvoGenConfig& cfg) {
  if (cfg.kMin < 1 || cfg.kMax < cfg.kMin) throw std::invalid_argument("bad k range");
  if (cfg.instMin < 1 || cfg.instMax < cfg.instMin)
    throw std::invalid_argument("bad instance count range");
  if (!(cfg.domainLo < cfg.domainHi)) throw std::invalid_argument("bad domain");
  if (seeds.size() < static_cast<size_t>(cfg.kMax) + 1)
    throw std::invalid_argument("need at least kMax+1 seed points");
  const int dims = static_cast<int>(seeds[0].coords.size());
  for (const auto& s : seeds) {
    if (static_cast<int>(s.coords.size()) != dims)
      throw std::invalid_argument("seed points have ragged dimensionality");
  }

  // clusters keep one scatter shape each; unconfigured labels rotate through
  // the four kinds in first-appearance order
  std::map<std::string, ScatterKind> scatterOf = cfg.scatterByLabel;
  {
    static const ScatterKind kinds[4] = {ScatterKind::Uniform, ScatterKind::Gaussian,
                                         ScatterKind::InverseGaussian,
                                         ScatterKind::MixtureGaussian};
    int next = 0;
    for (const auto& s : seeds) {
      if (scatterOf.find(s.label) == scatterOf.end()) scatterOf[s.label] = kinds[next++ % 4];
    }
  }

  std::mt19937_64 rng(cfg.seed);
  Dataset d;
  d.dims = dims;
  const int width = idWidth(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    const auto& seed = seeds[i];
    const int k = uniformInt(rng, cfg.kMin, cfg.kMax);
    // ball radius: distance to the k-th nearest other seed point
    std::vector<double> dists;
    dists.reserve(seeds.size() - 1);
    for (size_t j = 0; j < seeds.size(); ++j) {
      if (j != i) dists.push_back(euclideanDistance(seed.coords, seeds[j].coords));
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    const double radius = std::max(dists[k - 1], 1e-9);

    const int count = uniformInt(rng, cfg.instMin, cfg.instMax);
    const ScatterKind kind = scatterOf.at(seed.label);
    std::vector<double> mixAxis;
    if (kind == ScatterKind::MixtureGaussian) mixAxis = randomUnit(rng, dims);

    MultiValuedObject o;
    o.id = paddedId(static_cast<int>(i), width);
    o.label = seed.label;
    o.instances.resize(count);
    for (auto& inst : o.instances) {
      inst.coords = samplePointInBall(rng, seed.coords, radius, kind,
                                      mixAxis.empty() ? nullptr : &mixAxis);
    }
    const auto weights = drawWeights(rng, count);
    for (int c = 0; c < count; ++c) o.instances[c].weight = weights[c];
    d.objects.push_back(std::move(o));
  }
  rescaleToDomain(d, cfg.domainLo, cfg.domainHi);
  validateDataset(d);
  return d;
}

Dataset generateScaleDataset(const ScaleGenConfig& cfg) {
  if (cfg.n < 4) throw std::invalid_argument("need at least 4 objects");
  if (cfg.m < 1) throw std::invalid_argument("m must be at least 1");
  if (cfg.d < 2) throw std::invalid_argument("need at least 2 dimensions");

  std::mt19937_64 rng(cfg.seed);
  Dataset d;
  d.dims = cfg.d;
  const int width = idWidth(static_cast<size_t>(cfg.n));
  const double cellHalf = 250.0;
  const double centerSd = 62.5;
  const double instanceRadius = 50.0;
  for (int i = 0; i < cfg.n; ++i) {
    const int cell = i % 4;
    std::vector<double> center(cfg.d);
    for (int k = 0; k < 2; ++k) {
      const double mid = ((k == 0 ? cell & 1 : cell >> 1) != 0) ? 750.0 : 250.0;
      double c;
      do {
        c = normal(rng, mid, centerSd);
      } while (std::abs(c - mid) > cellHalf);
      center[k] = c;
    }
    for (int k = 2; k < cfg.d; ++k) {
      double c;
      do {
        c = normal(rng, 500.0, 125.0);
      } while (c < 0.0 || c > 1000.0);
      center[k] = c;
    }

    MultiValuedObject o;
    o.id = paddedId(i, width);
    o.label = std::to_string(cell);
    const int count = uniformInt(rng, 1, cfg.m);
    o.instances.resize(count);
    for (auto& inst : o.instances) {
      inst.coords = samplePointInBall(rng, center, instanceRadius, ScatterKind::Uniform);
    }
    std::vector<double> w(count);
    double sum = 0.0;
    for (auto& x : w) {
      do {
        x = normal(rng, 1.0, 0.25);
      } while (x < 0.01);
      sum += x;
    }
    for (int c = 0; c < count; ++c) o.instances[c].weight = w[c] / sum;
    d.objects.push_back(std::move(o));
  }
  validateDataset(d);
  return d;
}

namespace {

void blob(std::vector<SeedPoint>& out, std::mt19937_64& rng, const std::string& label, double cx,
          double cy, double sigma, int n) {
  for (int i = 0; i < n; ++i) {
    double x, y;
    do {
      x = normal(rng, 0.0, sigma);
      y = normal(rng, 0.0, sigma);
    } while (x * x + y * y > 9.0 * sigma * sigma);
    out.push_back(SeedPoint{{cx + x, cy + y}, label});
  }
}

// arc from degFrom to degTo; angleBias > 0 thins the point density linearly
// toward degTo (bias 2 means the start end is 3x as dense as the far end)
void arc(std::vector<SeedPoint>& out, std::mt19937_64& rng, const std::string& label, double cx,
         double cy, double radius, double degFrom, double degTo, double sigmaR, int n,
         double angleBias = 0.0) {
  for (int i = 0; i < n; ++i) {
    double t = uniform01(rng);
    if (angleBias > 0.0) {
      // inverse cdf of density f(t) = (1 + bias*(1-t)) / (1 + bias/2)
      const double a = 1.0 + angleBias;
      t = (a - std::sqrt(a * a - t * angleBias * (2.0 + angleBias))) / angleBias;
    }
    const double theta = (degFrom + t * (degTo - degFrom)) * kPi / 180.0;
    const double r = radius + normal(rng, 0.0, sigmaR);
    out.push_back(SeedPoint{{cx + r * std::cos(theta), cy + r * std::sin(theta)}, label});
  }
}

void ring(std::vector<SeedPoint>& out, std::mt19937_64& rng, const std::string& label, double cx,
          double cy, double radius, double sigmaR, int n) {
  arc(out, rng, label, cx, cy, radius, 0.0, 360.0, sigmaR, n);
}

std::vector<SeedPoint> layoutAggregation() {
  std::mt19937_64 rng(0xA66u);
  std::vector<SeedPoint> out;
  blob(out, rng, "0", 160, 780, 62, 170);
  blob(out, rng, "1", 430, 840, 55, 130);
  blob(out, rng, "2", 760, 820, 52, 120);
  blob(out, rng, "3", 170, 320, 68, 110);
  blob(out, rng, "4", 500, 470, 58, 100);
  blob(out, rng, "5", 830, 460, 48, 90);
  blob(out, rng, "6", 600, 130, 50, 68);
  return out;
}

std::vector<SeedPoint> layoutTwocircles() {
  std::mt19937_64 rng(0x7C1u);
  std::vector<SeedPoint> out;
  ring(out, rng, "0", 260, 700, 170, 8, 150);
  ring(out, rng, "1", 720, 640, 120, 7, 130);
  blob(out, rng, "2", 230, 180, 48, 120);
  blob(out, rng, "3", 730, 180, 45, 100);
  return out;
}

std::vector<SeedPoint> layoutJain() {
  std::mt19937_64 rng(0x1A1Du);
  std::vector<SeedPoint> out;
  // dense lower crescent, uniform density
  arc(out, rng, "0", 420, 205, 280, 25, 155, 14, 276);
  // sparse upper crescent thinning toward its right end
  arc(out, rng, "1", 460, 880, 320, 205, 335, 16, 97, 2.0);
  return out;
}

std::vector<SeedPoint> layoutCompound() {
  std::mt19937_64 rng(0xC03Du);
  std::vector<SeedPoint> out;
  blob(out, rng, "0", 170, 800, 42, 60);
  arc(out, rng, "1", 600, 810, 150, 160, 380, 10, 85);
  blob(out, rng, "2", 820, 300, 22, 40);
  ring(out, rng, "3", 820, 300, 165, 8, 120);
  blob(out, rng, "4", 200, 290, 48, 65);
  // noise halo: uniform scatter kept clear of every cluster point; noise
  // points may land near each other, too few of them to ever form a core
  const size_t clusterPoints = out.size();
  int placed = 0;
  while (placed < 29) {
    const double x = 30.0 + uniform01(rng) * 940.0;
    const double y = 30.0 + uniform01(rng) * 940.0;
    bool clear = true;
    for (size_t i = 0; i < clusterPoints; ++i) {
      const double dx = out[i].coords[0] - x;
      const double dy = out[i].coords[1] - y;
      if (dx * dx + dy * dy < 120.0 * 120.0) {
        clear = false;
        break;
      }
    }
    if (clear) {
      out.push_back(SeedPoint{{x, y}, "-1"});
      ++placed;
    }
  }
  return out;
}

}  // namespace

std::vector<SeedPoint> builtinLayout(const std::string& name) {
  if (name == "aggregation") return layoutAggregation();
  if (name == "compound") return layoutCompound();
  if (name == "jain") return layoutJain();
  if (name == "twocircles") return layoutTwocircles();
  throw std::invalid_argument("unknown layout '" + name + "'");
}

std::vector<std::string> builtinLayoutNames() {
  return {"aggregation", "compound", "jain", "twocircles"};
}

std::map<std::string, std::string> truthOf(const Dataset& d) {
  std::map<std::string, std::string> out;
  for (const auto& o : d.objects) out[o.id] = o.label.empty() ? "-1" : o.label;
  return out;
}

}  // namespace mvo
