// mvoclust: generate datasets, cluster them, benchmark pruning levels,
// sweep alpha grids, and dump k-distance profiles or index trees.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mvo/cluster.hpp"
#include "mvo/datagen.hpp"
#include "mvo/eval.hpp"
#include "mvo/index.hpp"

namespace {

using nlohmann::json;

int workerCount() {
  const char* env = std::getenv("MVOCLUST_WORKERS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

double medianOf(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> idOrderOf(const mvo::Dataset& d) {
  std::vector<std::string> ids;
  ids.reserve(d.objects.size());
  for (const auto& o : d.objects) ids.push_back(o.id);
  return ids;
}

json reportFor(const std::string& algo, const std::string& datasetPath, const json& params,
               const mvo::ClusterRun& run) {
  json r;
  r["algorithm"] = algo;
  r["dataset"] = datasetPath;
  r["params"] = params;
  r["runtimeMillis"] = run.clusterMillis;
  r["treeBuildMillis"] = run.treeBuildMillis;
  r["clusterCount"] = run.labeling.clusterCount;
  r["noiseCount"] = run.labeling.noiseCount();
  if (algo == "dbcmo") {
    json s;
    s["entriesVisited"] = run.stats.entriesVisited;
    s["distanceCallsMade"] = run.stats.distanceCallsMade;
    s["distanceCallsSaved"] = run.stats.distanceCallsSaved;
    for (int i = 1; i <= 4; ++i) s["rule" + std::to_string(i) + "Hits"] = run.stats.ruleHits[i];
    r["pruneStats"] = s;
  }
  return r;
}

struct ClusterOptions {
  std::string algo = "dbcmo";
  std::string in;
  std::string out;
  std::string truth;
  std::string report;
  std::string metrics;
  double alpha = 0.7;
  double rp = 0.7;
  double eps = 0.0;
  int minObs = 5;
  int samples = 20;
  std::string pruning = "P1-4";
  unsigned long long seed = 0;
  bool alphaSet = false, rpSet = false, samplesSet = false, pruningSet = false;
};

// flags meaningless for the chosen algorithm are usage errors, not silently ignored
void checkOptionCombos(const ClusterOptions& o) {
  if (o.algo == "dbcmo") {
    if (o.rpSet) throw CLI::ValidationError("--rp only applies to fdbscan");
    if (o.samplesSet) throw CLI::ValidationError("--samples only applies to fdbscan");
  } else if (o.algo == "fdbscan") {
    if (o.alphaSet) throw CLI::ValidationError("--alpha only applies to dbcmo");
    if (o.pruningSet) throw CLI::ValidationError("--pruning only applies to dbcmo");
  } else if (o.algo == "expdbscan") {
    if (o.alphaSet) throw CLI::ValidationError("--alpha only applies to dbcmo");
    if (o.rpSet) throw CLI::ValidationError("--rp only applies to fdbscan");
    if (o.samplesSet) throw CLI::ValidationError("--samples only applies to fdbscan");
    if (o.pruningSet) throw CLI::ValidationError("--pruning only applies to dbcmo");
  }
}

mvo::ClusterRun runAlgorithm(const mvo::Dataset& d, const ClusterOptions& o) {
  if (o.algo == "dbcmo") {
    mvo::ClusterParams p;
    p.minObs = o.minObs;
    p.query.alpha = o.alpha;
    p.query.eps = o.eps;
    p.query.pruning = mvo::parsePruningLevel(o.pruning);
    return mvo::dbcmo(d, p);
  }
  if (o.algo == "fdbscan") {
    mvo::BaselineParams bp;
    bp.sampleCount = o.samples;
    bp.reachabilityProbability = o.rp;
    bp.seed = o.seed;
    return mvo::fdbscan(d, o.minObs, o.eps, bp);
  }
  return mvo::expdbscan(d, o.minObs, o.eps);
}

json paramsJson(const ClusterOptions& o) {
  json p;
  p["minObs"] = o.minObs;
  p["eps"] = o.eps;
  if (o.algo == "dbcmo") {
    p["alpha"] = o.alpha;
    p["pruning"] = o.pruning;
  } else if (o.algo == "fdbscan") {
    p["rp"] = o.rp;
    p["samples"] = o.samples;
    p["seed"] = o.seed;
  }
  return p;
}

int cmdGenerate(const std::string& layout, bool scale, int n, int m, int d,
                unsigned long long seed, const std::string& outDir) {
  mvo::Dataset dataset;
  if (scale) {
    mvo::ScaleGenConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.d = d;
    cfg.seed = seed;
    dataset = mvo::generateScaleDataset(cfg);
  } else {
    mvo::MvoGenConfig cfg;
    cfg.seed = seed;
    dataset = mvo::generateMvoDataset(mvo::builtinLayout(layout), cfg);
  }
  std::filesystem::create_directories(outDir);
  const auto datasetPath = std::filesystem::path(outDir) / "dataset.jsonl";
  const auto labelsPath = std::filesystem::path(outDir) / "labels.csv";
  mvo::saveDataset(dataset, datasetPath.string());
  mvo::saveTruthCsv(mvo::truthOf(dataset), idOrderOf(dataset), labelsPath.string());
  std::cout << "wrote " << dataset.objects.size() << " objects to " << datasetPath.string()
            << " (truth: " << labelsPath.string() << ")\n";
  return 0;
}

int cmdCluster(const ClusterOptions& o) {
  const mvo::Dataset d = mvo::loadDataset(o.in);
  const mvo::ClusterRun run = runAlgorithm(d, o);
  const auto idOrder = idOrderOf(d);
  if (!o.out.empty()) mvo::saveLabelingCsv(run.labeling, idOrder, o.out);

  json report = reportFor(o.algo, o.in, paramsJson(o), run);
  if (!o.truth.empty()) {
    const auto truth = mvo::loadTruthCsv(o.truth);
    const auto counts = mvo::pairCounts(run.labeling, truth);
    const auto m = mvo::precisionRecallF1(counts);
    report["metrics"] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
    if (!o.metrics.empty()) {
      mvo::appendMetricsCsv(o.metrics, o.algo, o.in, m, run.clusterMillis);
    }
  }
  const std::string text = report.dump(2);
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    f << text << "\n";
  }
  std::cout << text << "\n";
  return 0;
}

int cmdBenchPruning(const std::string& in, double alpha, double eps, int minObs, int repeats,
                    const std::string& outPath) {
  const mvo::Dataset d = mvo::loadDataset(in);
  const char* levels[] = {"P0", "P1", "P1-2", "P1-3", "P1-4"};
  std::ostringstream csv;
  csv << "level,runtime_ms_median,distance_calls,entries_visited,rule1,rule2,rule3,rule4,"
         "distance_calls_saved,clusters,noise\n";
  std::map<std::string, int> referenceLabels;
  for (const char* level : levels) {
    mvo::ClusterParams p;
    p.minObs = minObs;
    p.query.alpha = alpha;
    p.query.eps = eps;
    p.query.pruning = mvo::parsePruningLevel(level);
    std::vector<double> times;
    mvo::ClusterRun last;
    for (int r = 0; r < repeats; ++r) {
      last = mvo::dbcmo(d, p);
      times.push_back(last.clusterMillis);
    }
    if (referenceLabels.empty()) {
      referenceLabels = last.labeling.label;
    } else if (last.labeling.label != referenceLabels) {
      // pruning must never change the result; this is a soundness bug
      std::cerr << "label mismatch between pruning levels at " << level << "\n";
      return 1;
    }
    csv << level << "," << medianOf(times) << "," << last.stats.distanceCallsMade << ","
        << last.stats.entriesVisited << "," << last.stats.ruleHits[1] << ","
        << last.stats.ruleHits[2] << "," << last.stats.ruleHits[3] << ","
        << last.stats.ruleHits[4] << "," << last.stats.distanceCallsSaved << ","
        << last.labeling.clusterCount << "," << last.labeling.noiseCount() << "\n";
  }
  if (outPath.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(outPath);
    f << csv.str();
    std::cout << "wrote " << outPath << "\n";
  }
  return 0;
}

int cmdSweepAlpha(const std::string& in, const std::string& algo, std::vector<double> grid,
                  double eps, int minObs, int repeats, unsigned long long seed,
                  const std::string& outPath) {
  const mvo::Dataset d = mvo::loadDataset(in);
  if (grid.empty()) {
    for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  }
  std::ostringstream csv;
  csv << "algorithm,alpha,runtime_ms_median,clusters,noise\n";
  for (double a : grid) {
    std::vector<double> times;
    mvo::ClusterRun last;
    for (int r = 0; r < repeats; ++r) {
      if (algo == "dbcmo") {
        mvo::ClusterParams p;
        p.minObs = minObs;
        p.query.alpha = a;
        p.query.eps = eps;
        last = mvo::dbcmo(d, p);
      } else if (algo == "fdbscan") {
        mvo::BaselineParams bp;
        bp.reachabilityProbability = a;
        bp.seed = seed;
        last = mvo::fdbscan(d, minObs, eps, bp);
      } else {
        last = mvo::expdbscan(d, minObs, eps);
      }
      times.push_back(last.clusterMillis);
    }
    csv << algo << "," << a << "," << medianOf(times) << "," << last.labeling.clusterCount << ","
        << last.labeling.noiseCount() << "\n";
  }
  if (outPath.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(outPath);
    f << csv.str();
    std::cout << "wrote " << outPath << "\n";
  }
  return 0;
}

int cmdKDist(const std::string& in, int k, double alpha, const std::string& outPath) {
  const mvo::Dataset d = mvo::loadDataset(in);
  const auto profile = mvo::kDistanceProfile(d, k, alpha, workerCount());
  std::ostringstream csv;
  csv.precision(17);
  csv << "id,kdist\n";
  for (const auto& row : profile) csv << row.first << "," << row.second << "\n";
  if (outPath.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(outPath);
    f << csv.str();
    std::cout << "wrote " << outPath << "\n";
  }
  return 0;
}

int cmdDumpTree(const std::string& in, const std::string& objectId) {
  const mvo::Dataset d = mvo::loadDataset(in);
  if (objectId.empty()) {
    const mvo::GlobalTree t = mvo::buildGlobalTree(d);
    mvo::dumpTree(t, std::cout);
  } else {
    const mvo::MultiValuedObject* o = d.find(objectId);
    if (o == nullptr) throw std::runtime_error("no object with id '" + objectId + "'");
    const mvo::LocalTree t = mvo::buildLocalTree(*o);
    mvo::dumpTree(t, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-based clustering of multi-valued objects"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic dataset");
  std::string genLayout, genOut;
  bool genScale = false;
  int genN = 2000, genM = 100, genD = 2;
  unsigned long long genSeed = 0;
  auto* layoutOpt = gen->add_option("--layout", genLayout, "built-in seed layout")
                        ->check(CLI::IsMember(mvo::builtinLayoutNames()));
  auto* scaleOpt = gen->add_flag("--scale", genScale, "use the scalability generator");
  layoutOpt->excludes(scaleOpt);
  gen->add_option("--n", genN, "object count (scale mode)");
  gen->add_option("--m", genM, "max instances per object (scale mode)");
  gen->add_option("--d", genD, "dimensionality (scale mode)");
  gen->add_option("--seed", genSeed, "random seed");
  gen->add_option("--out", genOut, "output directory")->required();

  // cluster
  ClusterOptions co;
  auto* cl = app.add_subcommand("cluster", "cluster a dataset");
  cl->add_option("--algo", co.algo, "algorithm")
      ->check(CLI::IsMember({"dbcmo", "fdbscan", "expdbscan"}));
  cl->add_option("--in", co.in, "dataset file")->required();
  cl->add_option("--out", co.out, "labels CSV to write");
  cl->add_option("--truth", co.truth, "truth CSV for quality metrics");
  cl->add_option("--report", co.report, "write the JSON report here too");
  cl->add_option("--metrics", co.metrics, "append a metrics CSV row here");
  cl->add_option("--eps", co.eps, "neighborhood radius")->required();
  cl->add_option("--minobs", co.minObs, "core object threshold");
  auto* alphaOpt = cl->add_option("--alpha", co.alpha, "distance quantile level (dbcmo)");
  auto* rpOpt = cl->add_option("--rp", co.rp, "reachability probability (fdbscan)");
  auto* samplesOpt = cl->add_option("--samples", co.samples, "samples per object (fdbscan)");
  auto* pruningOpt = cl->add_option("--pruning", co.pruning, "pruning level (dbcmo)")
                         ->check(CLI::IsMember({"P0", "P1", "P1-2", "P1-3", "P1-4"}));
  cl->add_option("--seed", co.seed, "sampling seed (fdbscan)");

  // bench-pruning
  auto* bench = app.add_subcommand("bench-pruning", "compare pruning levels");
  std::string benchIn, benchOut;
  double benchAlpha = 0.7, benchEps = 0.0;
  int benchMinObs = 5, benchRepeats = 3;
  bench->add_option("--in", benchIn, "dataset file")->required();
  bench->add_option("--alpha", benchAlpha, "distance quantile level");
  bench->add_option("--eps", benchEps, "neighborhood radius")->required();
  bench->add_option("--minobs", benchMinObs, "core object threshold");
  bench->add_option("--repeats", benchRepeats, "timing repeats per level")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", benchOut, "CSV output path (stdout if omitted)");

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "run an alpha (or RP) grid");
  std::string sweepIn, sweepAlgo = "dbcmo", sweepOut;
  std::vector<double> sweepGrid;
  double sweepEps = 0.0;
  int sweepMinObs = 5, sweepRepeats = 1;
  unsigned long long sweepSeed = 0;
  sweep->add_option("--in", sweepIn, "dataset file")->required();
  sweep->add_option("--algo", sweepAlgo, "algorithm")
      ->check(CLI::IsMember({"dbcmo", "fdbscan", "expdbscan"}));
  sweep->add_option("--alphas", sweepGrid, "grid values (default 0.1..1.0)")->delimiter(',');
  sweep->add_option("--eps", sweepEps, "neighborhood radius")->required();
  sweep->add_option("--minobs", sweepMinObs, "core object threshold");
  sweep->add_option("--repeats", sweepRepeats, "timing repeats per grid point")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweepSeed, "sampling seed (fdbscan)");
  sweep->add_option("--out", sweepOut, "CSV output path (stdout if omitted)");

  // kdist
  auto* kd = app.add_subcommand("kdist", "k-distance profile for eps selection");
  std::string kdIn, kdOut;
  int kdK = 5;
  double kdAlpha = 0.7;
  kd->add_option("--in", kdIn, "dataset file")->required();
  kd->add_option("--k", kdK, "neighbor rank")->check(CLI::PositiveNumber);
  kd->add_option("--alpha", kdAlpha, "distance quantile level");
  kd->add_option("--out", kdOut, "CSV output path (stdout if omitted)");

  // dump-tree
  auto* dump = app.add_subcommand("dump-tree", "print an index tree");
  std::string dumpIn, dumpObject;
  dump->add_option("--in", dumpIn, "dataset file")->required();
  dump->add_option("--object", dumpObject, "object id (local tree; global tree if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (!genScale && genLayout.empty()) {
        std::cerr << "generate: pass --layout NAME or --scale\n";
        return 2;
      }
      return cmdGenerate(genLayout, genScale, genN, genM, genD, genSeed, genOut);
    }
    if (cl->parsed()) {
      co.alphaSet = alphaOpt->count() > 0;
      co.rpSet = rpOpt->count() > 0;
      co.samplesSet = samplesOpt->count() > 0;
      co.pruningSet = pruningOpt->count() > 0;
      try {
        checkOptionCombos(co);
      } catch (const CLI::ValidationError& e) {
        std::cerr << "cluster: " << e.what() << "\n";
        return 2;
      }
      return cmdCluster(co);
    }
    if (bench->parsed())
      return cmdBenchPruning(benchIn, benchAlpha, benchEps, benchMinObs, benchRepeats, benchOut);
    if (sweep->parsed())
      return cmdSweepAlpha(sweepIn, sweepAlgo, sweepGrid, sweepEps, sweepMinObs, sweepRepeats,
                           sweepSeed, sweepOut);
    if (kd->parsed()) return cmdKDist(kdIn, kdK, kdAlpha, kdOut);
    if (dump->parsed()) return cmdDumpTree(dumpIn, dumpObject);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
