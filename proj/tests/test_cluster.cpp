#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "mvo/cluster.hpp"
#include "mvo/neighborhood.hpp"
#include "support.hpp"

using namespace mvo;

namespace {

std::vector<std::string> sortedIdsOf(const Dataset& d) {
  std::vector<std::string> ids;
  for (const auto& o : d.objects) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// single-point objects make geometric neighbor functions cheap and exact
Dataset pointDataset(const std::vector<std::pair<double, double>>& pts) {
  Dataset d;
  d.dims = 2;
  for (size_t i = 0; i < pts.size(); ++i) {
    d.objects.push_back(
        support::makeObject("p" + std::to_string(100 + i), {{pts[i].first, pts[i].second}}, {1.0}));
  }
  return d;
}

std::function<std::vector<std::string>(const std::string&)> euclidNeighbors(const Dataset& d,
                                                                            double eps) {
  return [&d, eps](const std::string& id) {
    const auto* self = d.find(id);
    std::vector<std::string> out;
    for (const auto& o : d.objects) {
      if (o.id == id ||
          euclideanDistance(self->instances[0].coords, o.instances[0].coords) <= eps)
        out.push_back(o.id);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
}

bool sameLabeling(const ClusterLabeling& a, const ClusterLabeling& b) {
  return a.label == b.label && a.core == b.core && a.clusterCount == b.clusterCount;
}

}  // namespace

TEST_CASE("expansion over hand-built neighbor graphs") {
  // chain of 5 points spaced 1 apart, eps 1.5: one cluster with minObs 3,
  // the chain ends are borders
  const Dataset chain = pointDataset({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
  const auto ids = sortedIdsOf(chain);
  const auto nbr = euclidNeighbors(chain, 1.5);

  const auto labeling = expandClusters(ids, 3, nbr);
  CHECK(labeling.clusterCount == 1);
  CHECK(labeling.noiseCount() == 0);
  CHECK(labeling.core.at("p100") == false);
  CHECK(labeling.core.at("p102") == true);
  CHECK(labeling.core.at("p104") == false);
  for (const auto& id : ids) CHECK(labeling.label.at(id) == 0);

  // lone far point becomes noise
  const Dataset lone = pointDataset({{0, 0}, {1, 0}, {2, 0}, {50, 50}});
  const auto labeling2 = expandClusters(sortedIdsOf(lone), 2, euclidNeighbors(lone, 1.5));
  CHECK(labeling2.clusterCount == 1);
  CHECK(labeling2.label.at("p103") == kNoiseLabel);
  CHECK(labeling2.noiseCount() == 1);

  CHECK_THROWS_AS(expandClusters(ids, 0, nbr), std::invalid_argument);
}

TEST_CASE("a border between two clusters joins the first one scanned") {
  // two dense quads and one midpoint reachable from one core of each; with
  // minObs 4 the midpoint has only 3 neighbors, so it cannot bridge them
  const Dataset d = pointDataset({
      {0, 0}, {1, 0}, {0.5, 0.8}, {0.5, -0.8},  // left quad: p100..p103
      {6, 0}, {7, 0}, {6.5, 0.8}, {6.5, -0.8},  // right quad: p104..p107
      {3.5, 0},                                 // p108: between the quad tips
  });
  const auto nbr = euclidNeighbors(d, 2.8);
  const auto labeling = expandClusters(sortedIdsOf(d), 4, nbr);
  CHECK(labeling.clusterCount == 2);
  CHECK(labeling.core.at("p108") == false);
  CHECK(labeling.label.at("p108") == labeling.label.at("p100"));
  CHECK(labeling.label.at("p104") != labeling.label.at("p100"));
}

TEST_CASE("expansion matches the flood-fill reference on random graphs") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> pos(0.0, 30.0);
  std::uniform_int_distribution<int> minObsPick(1, 6);
  std::uniform_real_distribution<double> epsPick(1.0, 6.0);
  for (int round = 0; round < 40; ++round) {
    std::vector<std::pair<double, double>> pts;
    const int n = 30 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) pts.push_back({pos(rng), pos(rng)});
    const Dataset d = pointDataset(pts);
    const auto ids = sortedIdsOf(d);
    const auto nbr = euclidNeighbors(d, epsPick(rng));
    const int minObs = minObsPick(rng);
    CHECK(sameLabeling(expandClusters(ids, minObs, nbr), support::dbscanReference(ids, minObs, nbr)));
  }
}

TEST_CASE("clustering the fixture pair end to end") {
  const Dataset d = support::checkinPair();
  ClusterParams params;
  params.minObs = 1;
  params.query.alpha = 0.5;
  params.query.eps = 25.0;
  const ClusterRun run = dbcmo(d, params);
  CHECK(run.labeling.clusterCount == 1);
  CHECK(run.labeling.noiseCount() == 0);
  CHECK(run.labeling.label.at("paul") == 0);
  CHECK(run.labeling.label.at("qiana") == 0);
  CHECK(run.labeling.core.at("paul"));
  CHECK(run.labeling.core.at("qiana"));
  CHECK(run.stats.distanceCallsMade > 0);

  // minObs above the neighborhood size turns both into noise
  params.minObs = 3;
  const ClusterRun sparse = dbcmo(d, params);
  CHECK(sparse.labeling.clusterCount == 0);
  CHECK(sparse.labeling.noiseCount() == 2);
}

TEST_CASE("full pipeline equals brute force composed with the reference") {
  std::mt19937_64 rng(555);
  const Dataset d = support::randomDataset(rng, 50, 2, 2, 12, 0.0, 90.0, 7.0);
  ClusterParams params;
  params.minObs = 4;
  params.query.alpha = 0.7;
  params.query.eps = 22.0;

  const auto ids = sortedIdsOf(d);
  const auto bruteNbr = [&](const std::string& id) {
    return support::bruteForceNeighborhood(d, id, params.query.alpha, params.query.eps);
  };
  const auto expected = support::dbscanReference(ids, params.minObs, bruteNbr);
  const ClusterRun run = dbcmo(d, params);
  CHECK(sameLabeling(run.labeling, expected));
}

TEST_CASE("labels do not depend on dataset file order") {
  std::mt19937_64 rng(777);
  Dataset d = support::randomDataset(rng, 40, 2, 2, 10, 0.0, 70.0, 6.0);
  ClusterParams params;
  params.minObs = 3;
  params.query.alpha = 0.6;
  params.query.eps = 18.0;
  const ClusterRun a = dbcmo(d, params);

  std::shuffle(d.objects.begin(), d.objects.end(), rng);
  const ClusterRun b = dbcmo(d, params);
  CHECK(sameLabeling(a.labeling, b.labeling));

  // sampling-based baseline is seeded per object id, so it is order-free too
  std::shuffle(d.objects.begin(), d.objects.end(), rng);
  const ClusterRun f1 = fdbscan(d, 3, 18.0, BaselineParams{});
  std::shuffle(d.objects.begin(), d.objects.end(), rng);
  const ClusterRun f2 = fdbscan(d, 3, 18.0, BaselineParams{});
  CHECK(sameLabeling(f1.labeling, f2.labeling));
}

TEST_CASE("sampling baseline on the fixture pair") {
  const Dataset d = support::checkinPair();
  // qualifying weight within 25 is 0.54; generous margins keep this stable
  BaselineParams bp;
  bp.sampleCount = 50;
  bp.seed = 42;
  bp.reachabilityProbability = 0.2;
  const ClusterRun joined = fdbscan(d, 1, 25.0, bp);
  CHECK(joined.labeling.clusterCount == 1);
  CHECK(joined.labeling.label.at("paul") == joined.labeling.label.at("qiana"));

  bp.reachabilityProbability = 0.9;
  const ClusterRun split = fdbscan(d, 1, 25.0, bp);
  CHECK(split.labeling.clusterCount == 2);
  CHECK(split.labeling.label.at("paul") != split.labeling.label.at("qiana"));

  CHECK_THROWS_AS(fdbscan(d, 1, 0.0, bp), std::invalid_argument);
  bp.sampleCount = 0;
  CHECK_THROWS_AS(fdbscan(d, 1, 25.0, bp), std::invalid_argument);
  bp.sampleCount = 10;
  bp.reachabilityProbability = 1.5;
  CHECK_THROWS_AS(fdbscan(d, 1, 25.0, bp), std::invalid_argument);
}

TEST_CASE("sampling baseline reduces to plain density clustering on points") {
  // with one instance per object the samples are all that instance, so the
  // reachability test degenerates to a plain distance comparison
  std::mt19937_64 rng(888);
  std::uniform_real_distribution<double> pos(0.0, 25.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({pos(rng), pos(rng)});
  const Dataset d = pointDataset(pts);
  const auto expected =
      support::dbscanReference(sortedIdsOf(d), 3, euclidNeighbors(d, 2.5));
  BaselineParams bp;
  bp.seed = 7;
  const ClusterRun run = fdbscan(d, 3, 2.5, bp);
  CHECK(sameLabeling(run.labeling, expected));
}

TEST_CASE("mean collapse baseline") {
  const Dataset d = support::checkinPair();
  const auto paulMean = aggregateObject(*d.find("paul"));
  CHECK(paulMean[0] == doctest::Approx(36.097).epsilon(1e-9));
  CHECK(paulMean[1] == doctest::Approx(41.7262).epsilon(1e-9));

  // the two means sit about 20.13 apart
  const ClusterRun joined = expdbscan(d, 1, 25.0);
  CHECK(joined.labeling.clusterCount == 1);
  const ClusterRun split = expdbscan(d, 1, 15.0);
  CHECK(split.labeling.clusterCount == 2);
  CHECK_THROWS_AS(expdbscan(d, 1, -1.0), std::invalid_argument);

  // equals plain density clustering over the mean points
  std::mt19937_64 rng(999);
  const Dataset rd = support::randomDataset(rng, 45, 2, 2, 10, 0.0, 60.0, 5.0);
  Dataset means;
  means.dims = 2;
  for (const auto& o : rd.objects) {
    means.objects.push_back(support::makeObject(o.id, {aggregateObject(o)}, {1.0}));
  }
  const auto expected =
      support::dbscanReference(sortedIdsOf(means), 3, euclidNeighbors(means, 9.0));
  CHECK(sameLabeling(expdbscan(rd, 3, 9.0).labeling, expected));
}

TEST_CASE("labeling files round-trip") {
  ClusterLabeling lab;
  lab.label = {{"a", 0}, {"b", 0}, {"c", kNoiseLabel}, {"d", 1}};
  lab.core = {{"a", true}, {"b", false}, {"c", false}, {"d", true}};
  lab.clusterCount = 2;
  const std::string path =
      (std::filesystem::temp_directory_path() / "mvo_labels_test.csv").string();
  saveLabelingCsv(lab, {"a", "b", "c", "d"}, path);
  const ClusterLabeling back = loadLabelingCsv(path);
  CHECK(back.label == lab.label);
  CHECK(back.core == lab.core);
  CHECK(back.clusterCount == lab.clusterCount);
  std::remove(path.c_str());

  CHECK_THROWS_AS(loadLabelingCsv("/no/such/labels.csv"), std::runtime_error);
  CHECK_THROWS_AS(saveLabelingCsv(lab, {"a", "zzz"}, path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("k-distance profile") {
  const Dataset spaced = pointDataset({{0, 0}, {10, 0}, {20, 0}});
  const auto rows = kDistanceProfile(spaced, 1, 0.7);
  REQUIRE(rows.size() == 3);
  for (const auto& [id, dist] : rows) CHECK(dist == doctest::Approx(10.0));

  const Dataset pair = support::checkinPair();
  const auto pairRows = kDistanceProfile(pair, 1, 0.5);
  REQUIRE(pairRows.size() == 2);
  CHECK(pairRows[0].second == doctest::Approx(21.80247921682303).epsilon(1e-12));
  CHECK(pairRows[1].second == doctest::Approx(21.80247921682303).epsilon(1e-12));

  CHECK_THROWS_AS(kDistanceProfile(pair, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kDistanceProfile(pair, 0, 0.5), std::invalid_argument);

  // profile is descending and worker fan-out does not change it
  std::mt19937_64 rng(321);
  const Dataset rd = support::randomDataset(rng, 30, 2, 2, 8);
  const auto p1 = kDistanceProfile(rd, 4, 0.7, 1);
  const auto p3 = kDistanceProfile(rd, 4, 0.7, 3);
  CHECK(p1 == p3);
  for (size_t i = 1; i < p1.size(); ++i) CHECK(p1[i - 1].second >= p1[i].second);
}

TEST_CASE("eps from a quantile over the profile") {
  std::vector<std::pair<std::string, double>> profile{
      {"a", 50.0}, {"b", 40.0}, {"c", 30.0}, {"d", 20.0}, {"e", 10.0}};
  CHECK(epsAtQuantile(profile, 0.0) == 10.0);
  CHECK(epsAtQuantile(profile, 1.0) == 50.0);
  CHECK(epsAtQuantile(profile, 0.5) == 30.0);
  CHECK(epsAtQuantile(profile, 0.75) == 40.0);
  CHECK_THROWS_AS(epsAtQuantile({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(epsAtQuantile(profile, 1.2), std::invalid_argument);
}
