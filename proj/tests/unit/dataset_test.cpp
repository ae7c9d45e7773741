#include <gtest/gtest.h>

#include <random>

#include "dosgk/dataset.hpp"
#include "dosgk/error.hpp"
#include "support/temp_dir.hpp"

namespace dosgk {
namespace {

using testing::TempDir;

void write_set(const TempDir& dir, const std::string& a, const std::string& ind, const std::string& lab) {
  dir.write("T_A.txt", a);
  dir.write("T_graph_indicator.txt", ind);
  dir.write("T_graph_labels.txt", lab);
}

ErrorCode load_error(const TempDir& dir) {
  try {
    load_tudataset(dir.path(), "T");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

TEST(LoadTudataset, MinimalPathOfTwo) {
  TempDir dir;
  write_set(dir, "1, 2\n2, 1\n", "1\n1\n", "1\n");
  const Dataset d = load_tudataset(dir.path(), "T");
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d.graphs[0].num_nodes(), 2);
  EXPECT_EQ(d.graphs[0].num_edges(), 1);
  EXPECT_EQ(d.labels, std::vector<int>{0});
  EXPECT_EQ(d.num_classes(), 1);
  EXPECT_EQ(d.source_checksum.size(), 64U);
}

TEST(LoadTudataset, LocalIdsLabelsAndWhitespace) {
  TempDir dir;
  // Graph 1: nodes 1-3 (triangle), graph 2: nodes 4-5 (edge), graph 3: node 6 alone.
  write_set(dir, "1,2\n2,1\n 2 , 3\n3, 2\n1, 3\n3, 1\r\n4, 5\n5, 4\n\n", "1\n1\n1\n2\n2\n3\n",
            "5\n-1\n5\n");
  const Dataset d = load_tudataset(dir.path(), "T");
  ASSERT_EQ(d.size(), 3U);
  EXPECT_EQ(d.graphs[0].num_edges(), 3);
  EXPECT_DOUBLE_EQ(d.graphs[1].value(0, 1), 1.0);
  EXPECT_EQ(d.graphs[2].num_nodes(), 1);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(d.original_labels, (std::vector<std::int64_t>{-1, 5}));
  EXPECT_NEAR(d.mean_nodes(), 2.0, 1e-15);
}

TEST(LoadTudataset, DeterministicChecksum) {
  TempDir dir;
  write_set(dir, "1, 2\n2, 1\n", "1\n1\n", "1\n");
  const auto first = load_tudataset(dir.path(), "T").source_checksum;
  EXPECT_EQ(load_tudataset(dir.path(), "T").source_checksum, first);
  dir.write("T_graph_labels.txt", "2\n");
  EXPECT_NE(load_tudataset(dir.path(), "T").source_checksum, first);
}

TEST(LoadTudataset, AttributeFilesProduceWarning) {
  TempDir dir;
  write_set(dir, "1, 2\n2, 1\n", "1\n1\n", "1\n");
  dir.write("T_node_labels.txt", "0\n0\n");
  const Dataset d = load_tudataset(dir.path(), "T");
  ASSERT_EQ(d.warnings.size(), 1U);
  EXPECT_NE(d.warnings[0].find("node_labels"), std::string::npos);
}

TEST(LoadTudataset, MissingFile) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n");
  EXPECT_EQ(load_error(dir), ErrorCode::MissingFile);
}

TEST(LoadTudataset, MalformedLineReportsLineNumber) {
  TempDir dir;
  write_set(dir, "1, 2\n2; 1\n", "1\n1\n", "1\n");
  try {
    load_tudataset(dir.path(), "T");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedLine);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  write_set(dir, "1, x\n", "1\n1\n", "1\n");
  EXPECT_EQ(load_error(dir), ErrorCode::MalformedLine);
}

TEST(LoadTudataset, IndicatorOutOfRange) {
  TempDir dir;
  write_set(dir, "1, 2\n", "1\n2\n", "1\n");
  EXPECT_EQ(load_error(dir), ErrorCode::IndicatorOutOfRange);
  write_set(dir, "1, 3\n", "1\n1\n", "1\n");
  EXPECT_EQ(load_error(dir), ErrorCode::IndicatorOutOfRange);
  write_set(dir, "1, 2\n", "1\n2\n", "1\n1\n");
  EXPECT_EQ(load_error(dir), ErrorCode::IndicatorOutOfRange);  // edge across graphs
  write_set(dir, "", "1\n3\n", "1\n1\n1\n");
  EXPECT_EQ(load_error(dir), ErrorCode::IndicatorOutOfRange);  // graph 2 empty
}

TEST(WriteTudataset, RoundTrip) {
  TempDir dir;
  const std::vector<std::pair<Index, Index>> e1{{0, 1}, {1, 2}}, e2{{0, 1}};
  const std::vector<CsrGraph> graphs{CsrGraph::from_undirected_edges(3, e1),
                                     CsrGraph::from_undirected_edges(4, e2)};
  const std::vector<std::int64_t> labels{3, 7};
  write_tudataset(dir.path(), "W", graphs, labels);
  const Dataset d = load_tudataset(dir.path(), "W");
  ASSERT_EQ(d.size(), 2U);
  EXPECT_EQ(d.graphs[0].fingerprint(), graphs[0].fingerprint());
  EXPECT_EQ(d.graphs[1].fingerprint(), graphs[1].fingerprint());
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1}));
}

Dataset sized_dataset(const std::vector<Index>& nodes, const std::vector<int>& labels) {
  Dataset d;
  d.name = "S";
  for (Index n : nodes) d.graphs.push_back(CsrGraph::from_entries(n, {}));
  d.labels = labels;
  int classes = 0;
  for (int l : labels) classes = std::max(classes, l + 1);
  for (int c = 0; c < classes; ++c) d.original_labels.push_back(c);
  return d;
}

TEST(FilterBalance, IdentityWithoutFilters) {
  const Dataset d = sized_dataset({3, 1, 4, 1, 5}, {0, 1, 0, 1, 0});
  const Dataset out = filter_balance(d, {});
  ASSERT_EQ(out.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(out.graphs[i].num_nodes(), d.graphs[i].num_nodes());
  EXPECT_EQ(out.labels, d.labels);
}

TEST(FilterBalance, DropsSmallGraphs) {
  const Dataset d = sized_dataset({3, 1, 4, 1, 5}, {0, 1, 0, 1, 0});
  const Dataset out = filter_balance(d, {3, false, 0});
  ASSERT_EQ(out.size(), 2U);
  EXPECT_EQ(out.graphs[0].num_nodes(), 4);
  EXPECT_EQ(out.graphs[1].num_nodes(), 5);
  // Class 1 vanished, labels stay contiguous.
  EXPECT_EQ(out.num_classes(), 1);
  EXPECT_EQ(out.labels, (std::vector<int>{0, 0}));
}

TEST(FilterBalance, BalancesToMinorityDeterministically) {
  std::vector<Index> nodes(14, 3);
  std::vector<int> labels;
  for (int i = 0; i < 14; ++i) labels.push_back(i < 10 ? 0 : 1);
  for (int i = 0; i < 14; ++i) nodes[static_cast<std::size_t>(i)] = 2 + i;
  const Dataset d = sized_dataset(nodes, labels);
  const Dataset a = filter_balance(d, {0, true, 11});
  const Dataset b = filter_balance(d, {0, true, 11});
  EXPECT_EQ(a.class_counts(), (std::vector<std::size_t>{4, 4}));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.graphs[i].num_nodes(), b.graphs[i].num_nodes());
  // Order preserved: node counts increase with original position.
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a.graphs[i - 1].num_nodes(), a.graphs[i].num_nodes());
}

TEST(FilterBalance, EmptyResult) {
  const Dataset d = sized_dataset({3, 1}, {0, 1});
  try {
    filter_balance(d, {10, false, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyResult);
  }
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

}  // namespace
}  // namespace dosgk
