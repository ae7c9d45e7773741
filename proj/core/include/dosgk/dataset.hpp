#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dosgk/graph.hpp"

namespace dosgk {

/// Graph classification dataset. Graphs hold the raw (unnormalized) adjacency.
struct Dataset {
  std::string name;
  std::vector<CsrGraph> graphs;
  /// Class per graph, contiguous in [0, num_classes).
  std::vector<int> labels;
  /// original_labels[c] is the label in the source files for class c.
  std::vector<std::int64_t> original_labels;
  /// Hex SHA-256 over the source files that define the graphs and labels.
  std::string source_checksum;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return graphs.size(); }
  int num_classes() const noexcept { return static_cast<int>(original_labels.size()); }
  double mean_nodes() const noexcept;
  double mean_edges() const noexcept;
  std::vector<std::size_t> class_counts() const;
};

struct FilterSpec {
  /// Graphs with at most this many nodes are dropped.
  Index min_nodes = 0;
  /// Downsample every class to the minority count.
  bool balance_classes = false;
  std::uint64_t seed = 0;
};

/// Reads <dir>/<name>_A.txt, _graph_indicator.txt and _graph_labels.txt.
/// Edge pairs are 1-indexed "i, j"; attribute and label files are ignored
/// with a warning. Throws MissingFile, MalformedLine, IndicatorOutOfRange.
Dataset load_tudataset(const std::filesystem::path& dir, const std::string& name);

/// Drops small graphs, optionally balances classes by seeded downsampling
/// without replacement. Order is preserved. Throws EmptyResult.
Dataset filter_balance(const Dataset& d, const FilterSpec& spec);

/// Writes graphs in the same text format load_tudataset reads. Labels are
/// written as given (the loader remaps them).
void write_tudataset(const std::filesystem::path& dir, const std::string& name,
                     std::span<const CsrGraph> graphs, std::span<const std::int64_t> labels);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace dosgk
