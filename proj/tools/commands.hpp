#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dosgk/error.hpp"
#include "dosgk/graph.hpp"

namespace dosgk::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kMalformedDataset = 3,
  kChecksumMismatch = 4,
  kSizeMismatch = 5,
};

/// Exit status reported for a library error.
int exit_code_for(ErrorCode code) noexcept;

/// Parses "-1/4,-1/3,0.5" into doubles; "none" or "" gives an empty list.
std::vector<double> parse_motif_list(const std::string& text);

struct FeaturesOptions {
  std::string dataset_dir;
  std::string name;
  int moments = 50;
  int probes = 2000;
  std::uint64_t seed = 0;
  bool jackson = true;
  std::string motifs = "-1/4,-1/3,-1/2,0";
  std::string probe_kind = "gaussian";
  std::string isolated = "keep";
  std::string out;
  std::string dos_csv;
  std::size_t threads = 1;
  Index min_nodes = 0;
  bool balance = false;
  bool quiet = false;
};

struct KernelOptions {
  std::string features;
  std::string kind = "composite";
  int p = 1;
  double w1 = 0.5;
  std::string gamma = "auto";
  std::string base_gamma = "auto";
  std::optional<std::string> expect_checksum;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  std::size_t threads = 1;
};

struct ClassifyOptions {
  std::string kernel;
  std::string labels;
  int folds = 10;
  int repeats = 10;
  int inner_folds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::optional<std::string> expect_checksum;
  std::string out;
  bool omit_timing = false;
};

struct ScalingOptions {
  std::vector<std::int64_t> sizes = {10000, 20000, 40000, 80000, 160000};
  /// "circulant", "random-regular" or "preferential".
  std::string family = "preferential";
  int probes = 64;
  int moments = 50;
  Index edges_per_node = 5;
  int repetitions = 3;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

struct ScalingRow {
  std::int64_t edges = 0;
  Index nodes = 0;
  double seconds = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Each command writes its report to `out`, warnings and notices to `err`,
/// and returns a process exit code. Library errors are mapped, not thrown.
int cmd_features(const FeaturesOptions& opt, std::ostream& out, std::ostream& err);
int cmd_kernel(const KernelOptions& opt, std::ostream& out, std::ostream& err);
int cmd_classify(const ClassifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_scaling_bench(const ScalingOptions& opt, std::ostream& out, std::ostream& err);

/// Timing rows measured by the scaling benchmark, without any file output.
std::vector<ScalingRow> run_scaling(const ScalingOptions& opt);

/// Argument parsing and dispatch for the dosgk executable.
int run(int argc, char** argv);

}  // namespace dosgk::cli
