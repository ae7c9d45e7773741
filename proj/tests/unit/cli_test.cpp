#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "dosgk/container.hpp"
#include "dosgk/dataset.hpp"
#include "dosgk/synthetic.hpp"
#include "json.hpp"
#include "support/temp_dir.hpp"

namespace dosgk::cli {
namespace {

using testing::TempDir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes a two-class dataset: sparse random graphs against denser ones.
void write_toy(const std::filesystem::path& dir, const std::string& name, int per_class = 12,
               bool duplicate = false) {
  std::mt19937_64 rng(42);
  std::vector<CsrGraph> graphs;
  std::vector<std::int64_t> labels;
  for (int i = 0; i < 2 * per_class; ++i) {
    const bool dense = i % 2 == 1;
    if (duplicate && !graphs.empty()) {
      graphs.push_back(graphs.front());
    } else {
      std::mt19937_64 local(rng());
      graphs.push_back(synthetic::erdos_renyi(12 + i % 5, dense ? 0.5 : 0.15, local));
    }
    labels.push_back(dense ? 1 : -1);
  }
  write_tudataset(dir, name, graphs, labels);
}

FeaturesOptions features_opts(const TempDir& dir, const std::string& out) {
  FeaturesOptions o;
  o.dataset_dir = dir.path().string();
  o.name = "TOY";
  o.moments = 20;
  o.probes = 64;
  o.seed = 7;
  o.out = (dir / out).string();
  o.quiet = true;
  return o;
}

TEST(ParseMotifList, Fractions) {
  const auto v = parse_motif_list("-1/4, -1/3,-1/2,0");
  ASSERT_EQ(v.size(), 4U);
  EXPECT_EQ(v[0], -0.25);
  EXPECT_EQ(v[1], -1.0 / 3.0);
  EXPECT_EQ(v[3], 0.0);
  EXPECT_TRUE(parse_motif_list("none").empty());
  EXPECT_EQ(parse_motif_list("0.5"), std::vector<double>{0.5});
  EXPECT_THROW(parse_motif_list("1/0"), Error);
  EXPECT_THROW(parse_motif_list("x"), Error);
}

TEST(FitLine, ExactLine) {
  const LinearFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Features, DeterministicContainerAndNotices) {
  TempDir dir;
  write_toy(dir.path(), "TOY");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_features(features_opts(dir, "a.dosfeat"), out, err), kOk) << err.str();
  ASSERT_EQ(cmd_features(features_opts(dir, "b.dosfeat"), out, err), kOk) << err.str();
  EXPECT_EQ(slurp(dir / "a.dosfeat"), slurp(dir / "b.dosfeat"));
  const FeatureSet f = load_features(dir / "a.dosfeat");
  EXPECT_EQ(f.size(), 24U);
  EXPECT_EQ(f.dos.cols(), 21);
  EXPECT_EQ(f.rpf[0].rows(), 21);
  EXPECT_EQ(f.params.num_probes, 64);
  EXPECT_EQ(f.params.motif_eigenvalues.size(), 4U);
  EXPECT_TRUE(f.params.jackson);

  // Thread count does not change the payload.
  FeaturesOptions threaded = features_opts(dir, "c.dosfeat");
  threaded.threads = 4;
  ASSERT_EQ(cmd_features(threaded, out, err), kOk);
  EXPECT_EQ(slurp(dir / "a.dosfeat"), slurp(dir / "c.dosfeat"));

  // Per-graph timing table unless quiet.
  FeaturesOptions loud = features_opts(dir, "d.dosfeat");
  loud.quiet = false;
  std::ostringstream table;
  ASSERT_EQ(cmd_features(loud, table, err), kOk);
  EXPECT_NE(table.str().find("graph,nodes,edges,seconds\n0,"), std::string::npos);
}

TEST(Features, ManyMomentsCapsRpf) {
  TempDir dir;
  write_toy(dir.path(), "TOY", 2);
  FeaturesOptions o = features_opts(dir, "f");
  o.moments = 400;
  o.probes = 16;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_features(o, out, err), kOk) << err.str();
  const FeatureSet f = load_features(dir / "f");
  EXPECT_EQ(f.dos.cols(), 401);
  EXPECT_EQ(f.rpf[0].rows(), 51);
  EXPECT_NE(err.str().find("capped"), std::string::npos);
}

TEST(Features, DosCsvExport) {
  TempDir dir;
  write_toy(dir.path(), "TOY", 2);
  FeaturesOptions o = features_opts(dir, "f");
  o.moments = 3;
  o.dos_csv = (dir / "dos.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_features(o, out, err), kOk);
  const std::string csv = slurp(dir / "dos.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "graph_id,m0,m1,m2,m3");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Features, ExitCodes) {
  TempDir dir;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_features(features_opts(dir, "f"), out, err), kIoError);
  dir.write("TOY_A.txt", "1, 2\n2; 1\n");
  dir.write("TOY_graph_indicator.txt", "1\n1\n");
  dir.write("TOY_graph_labels.txt", "1\n");
  EXPECT_EQ(cmd_features(features_opts(dir, "f"), out, err), kMalformedDataset);
  EXPECT_NE(err.str().find("TOY_A.txt:2"), std::string::npos);
}

TEST(Features, IsolatedNodesAreReported) {
  TempDir dir;
  const std::vector<std::pair<Index, Index>> e{{0, 1}};
  const std::vector<CsrGraph> graphs{CsrGraph::from_undirected_edges(3, e)};
  const std::vector<std::int64_t> labels{0};
  write_tudataset(dir.path(), "TOY", graphs, labels);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_features(features_opts(dir, "f"), out, err), kOk);
  EXPECT_NE(err.str().find("isolated"), std::string::npos);
  FeaturesOptions drop = features_opts(dir, "g");
  drop.isolated = "drop";
  ASSERT_EQ(cmd_features(drop, out, err), kOk);
  EXPECT_EQ(load_features(dir / "g").rpf[0].cols(), 2);
}

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    write_toy(dir_.path(), "TOY");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_features(features_opts(dir_, "f.dosfeat"), out, err), kOk) << err.str();
  }

  KernelOptions kernel_opts(const std::string& kind, const std::string& out) const {
    KernelOptions o;
    o.features = (dir_ / "f.dosfeat").string();
    o.kind = kind;
    o.out = (dir_ / out).string();
    return o;
  }

  TempDir dir_;
};

TEST_F(Pipeline, KernelsHaveUnitDiagonalAndSidecar) {
  std::ostringstream out, err;
  for (const std::string kind : {"dos", "ldos", "composite"}) {
    ASSERT_EQ(cmd_kernel(kernel_opts(kind, kind + ".k"), out, err), kOk) << err.str();
    const KernelFile kf = load_kernel(dir_ / (kind + ".k"));
    EXPECT_EQ(kf.kernel.K.rows(), 24);
    for (Eigen::Index i = 0; i < 24; ++i) EXPECT_EQ(kf.kernel.K(i, i), 1.0);
    const auto sidecar = nlohmann::json::parse(slurp(dir_ / (kind + ".k.json")));
    EXPECT_EQ(sidecar.at("kind"), kind);
  }
  const KernelFile c = load_kernel(dir_ / "composite.k");
  EXPECT_EQ(c.kernel.params.weights.w1, 0.5);
  EXPECT_EQ(c.kernel.params.weights.w2, 0.5);
}

TEST_F(Pipeline, AutoGammaForBothExponents) {
  std::ostringstream out, err;
  KernelOptions p1 = kernel_opts("dos", "p1.k");
  KernelOptions p2 = kernel_opts("dos", "p2.k");
  p2.p = 2;
  ASSERT_EQ(cmd_kernel(p1, out, err), kOk);
  ASSERT_EQ(cmd_kernel(p2, out, err), kOk);
  const Matrix a = load_kernel(dir_ / "p1.k").kernel.K;
  const Matrix b = load_kernel(dir_ / "p2.k").kernel.K;
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.diagonal(), Vector::Ones(24));
  EXPECT_EQ(b.diagonal(), Vector::Ones(24));
  KernelOptions fixed = kernel_opts("dos", "fixed.k");
  fixed.gamma = "0.5";
  ASSERT_EQ(cmd_kernel(fixed, out, err), kOk);
  EXPECT_EQ(load_kernel(dir_ / "fixed.k").kernel.params.gamma, 0.5);
}

TEST_F(Pipeline, KernelChecksumMismatchExitCode) {
  std::ostringstream out, err;
  KernelOptions o = kernel_opts("dos", "k");
  o.expect_checksum = std::string(64, '0');
  EXPECT_EQ(cmd_kernel(o, out, err), kChecksumMismatch);
  std::string bytes = slurp(dir_ / "f.dosfeat");
  bytes.back() = static_cast<char>(bytes.back() ^ 0x40);
  std::ofstream(dir_ / "f.dosfeat", std::ios::binary | std::ios::trunc) << bytes;
  EXPECT_EQ(cmd_kernel(kernel_opts("dos", "k"), out, err), kChecksumMismatch);
}

TEST_F(Pipeline, ClassifyJsonIsDeterministic) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_kernel(kernel_opts("composite", "c.k"), out, err), kOk);
  ClassifyOptions o;
  o.kernel = (dir_ / "c.k").string();
  o.repeats = 2;
  o.seed = 3;
  o.omit_timing = true;
  o.out = (dir_ / "a.json").string();
  std::ostringstream line;
  ASSERT_EQ(cmd_classify(o, line, err), kOk) << err.str();
  o.out = (dir_ / "b.json").string();
  o.threads = 3;
  ASSERT_EQ(cmd_classify(o, out, err), kOk);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  const auto report = nlohmann::json::parse(slurp(dir_ / "a.json"));
  for (const char* key : {"dataset", "kernel_kind", "params", "mean_accuracy", "std", "std_all_folds",
                          "per_repeat", "chosen_C_histogram"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_FALSE(report.contains("wall_time"));
  EXPECT_EQ(report.at("dataset"), "TOY");
  // "TOY composite: 87.50 (1.25)"-style line.
  EXPECT_NE(line.str().find("TOY composite: "), std::string::npos);
  EXPECT_NE(line.str().find(" ("), std::string::npos);
  EXPECT_GT(report.at("mean_accuracy").get<double>(), 75.0);

  o.omit_timing = false;
  ASSERT_EQ(cmd_classify(o, out, err), kOk);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "b.json")).contains("wall_time"));
}

TEST_F(Pipeline, ClassifyLabelOverrideAndSizeMismatch) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_kernel(kernel_opts("dos", "d.k"), out, err), kOk);
  ClassifyOptions o;
  o.kernel = (dir_ / "d.k").string();
  o.repeats = 1;
  dir_.write("short.txt", "1\n2\n3\n");
  o.labels = (dir_ / "short.txt").string();
  EXPECT_EQ(cmd_classify(o, out, err), kSizeMismatch);
  std::string labels;
  for (int i = 0; i < 24; ++i) labels += (i % 2 ? "7\n" : "3\n");
  dir_.write("labels.txt", labels);
  o.labels = (dir_ / "labels.txt").string();
  EXPECT_EQ(cmd_classify(o, out, err), kOk) << err.str();
  o.kernel = (dir_ / "missing.k").string();
  EXPECT_EQ(cmd_classify(o, out, err), kIoError);
}

TEST(Kernel, DuplicatedGraphsGiveAllOnes) {
  TempDir dir;
  write_toy(dir.path(), "TOY", 3, true);
  std::ostringstream out, err;
  FeaturesOptions fo = features_opts(dir, "f");
  fo.probe_kind = "identity";
  ASSERT_EQ(cmd_features(fo, out, err), kOk);
  KernelOptions ko;
  ko.features = (dir / "f").string();
  ko.kind = "dos";
  ko.out = (dir / "k").string();
  ko.csv = (dir / "k.csv").string();
  ASSERT_EQ(cmd_kernel(ko, out, err), kOk);
  EXPECT_NE(err.str().find("zero"), std::string::npos);
  EXPECT_EQ(load_kernel(dir / "k").kernel.K, Matrix::Ones(6, 6));
  EXPECT_EQ(slurp(dir / "k.csv").substr(0, 12), "1,1,1,1,1,1\n");
}

TEST(ScalingBench, RowsAndDeterministicGraphs) {
  ScalingOptions o;
  o.sizes = {2000, 4000, 8000, 16000, 32000};
  o.probes = 16;
  o.moments = 20;
  o.repetitions = 3;
  const auto rows = run_scaling(o);
  ASSERT_EQ(rows.size(), 5U);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].edges, rows[i - 1].edges);
    EXPECT_GT(rows[i].seconds, rows[i - 1].seconds);
  }
  const auto again = run_scaling(o);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(again[i].edges, rows[i].edges);
  TempDir dir;
  o.out = (dir / "s.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_scaling_bench(o, out, err), kOk);
  const std::string csv = slurp(dir / "s.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "edges,nodes,seconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(err.str().find("R^2"), std::string::npos);
}

TEST(ScalingBench, FamiliesKeepEdgesPerNode) {
  ScalingOptions o;
  o.sizes = {5000};
  o.probes = 16;
  o.moments = 5;
  o.repetitions = 1;
  for (const char* family : {"circulant", "random-regular", "preferential"}) {
    o.family = family;
    const auto rows = run_scaling(o);
    ASSERT_EQ(rows.size(), 1U);
    EXPECT_EQ(rows[0].nodes, 1000) << family;
    EXPECT_NEAR(static_cast<double>(rows[0].edges), 5000.0, 100.0) << family;
  }
  o.family = "lattice";
  EXPECT_THROW(run_scaling(o), Error);
}

TEST(Run, UsageErrors) {
  const char* argv1[] = {"dosgk"};
  EXPECT_EQ(run(1, const_cast<char**>(argv1)), kUsage);
  const char* argv2[] = {"dosgk", "kernel", "x", "--kind", "wl", "--out", "y"};
  EXPECT_EQ(run(7, const_cast<char**>(argv2)), kUsage);
}

}  // namespace
}  // namespace dosgk::cli
