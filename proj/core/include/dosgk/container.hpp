#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dosgk/features.hpp"
#include "dosgk/graph.hpp"
#include "dosgk/kernels.hpp"
#include "dosgk/kpm.hpp"

namespace dosgk {

inline constexpr int kContainerVersion = 1;
inline constexpr char kContainerMagic[8] = {'D', 'O', 'S', 'G', 'K', 'B', 'I', 'N'};

/// Parameters stored alongside features, enough to regenerate them.
struct FeatureParams {
  int num_moments = 0;
  int rpf_degree = 0;
  int num_probes = 0;
  ProbeKind probe_kind = ProbeKind::Gaussian;
  bool jackson = false;
  std::vector<double> motif_eigenvalues;
  std::uint64_t seed = 0;
  IsolatedNodePolicy isolated_policy = IsolatedNodePolicy::KeepZeroRow;
};

struct FeatureSet {
  std::string dataset_name;
  std::string dataset_checksum;
  std::vector<int> labels;
  FeatureParams params;
  /// One row per graph, num_moments + 1 columns.
  Matrix dos;
  /// Per-graph RPF, (rpf_degree + 1) x n_g.
  std::vector<Matrix> rpf;

  std::size_t size() const noexcept { return rpf.size(); }
  std::vector<DosFeature> dos_features() const;
  std::vector<RpfFeature> rpf_features() const;
};

void save_features(const std::filesystem::path& path, const FeatureSet& fs);
/// Throws VersionMismatch, ChecksumMismatch (payload corrupt, or dataset
/// checksum differs from expected_dataset_checksum when given), IoError.
FeatureSet load_features(const std::filesystem::path& path,
                         const std::optional<std::string>& expected_dataset_checksum = {});

struct KernelFile {
  std::string dataset_name;
  std::string dataset_checksum;
  std::vector<int> labels;
  KernelMatrix kernel;
};

void save_kernel(const std::filesystem::path& path, const KernelFile& kf);
KernelFile load_kernel(const std::filesystem::path& path,
                       const std::optional<std::string>& expected_dataset_checksum = {});

/// JSON description of kernel parameters (used for the sidecar file).
std::string kernel_params_json(const KernelFile& kf);

/// Header graph_id,m0,...,mS then one row per graph.
void write_dos_csv(std::ostream& out, const FeatureSet& fs);
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace dosgk
