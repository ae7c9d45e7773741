#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dosgk/features.hpp"
#include "dosgk/graph.hpp"

namespace dosgk {

enum class KernelKind { Dos, Ldos, Composite };

std::string_view to_string(KernelKind kind) noexcept;
KernelKind kernel_kind_from_string(std::string_view name);

/// w1 weighs the Hadamard product, w2 the averaged sum; w1 + w2 = 1.
struct CompositeWeights {
  double w1 = 0.5;
  double w2 = 0.5;

  static CompositeWeights from_w1(double w1);
  void validate() const;
};

struct KernelParams {
  KernelKind kind = KernelKind::Dos;
  double gamma = 1.0;
  int p = 2;
  /// RBF bandwidth over node RPF columns inside the MMD (LDOS only).
  double base_gamma = 0.0;
  CompositeWeights weights;
  /// Bandwidths of the two factors of a composite kernel.
  double dos_gamma = 0.0;
  double ldos_gamma = 0.0;
};

struct KernelMatrix {
  Matrix K;
  KernelParams params;

  Eigen::Index size() const noexcept { return K.rows(); }
};

/// Euclidean distances between DOS embeddings. Throws LengthMismatch.
Matrix dos_distances(std::span<const DosFeature> features, std::size_t threads = 1);

/// exp(-gamma * ||mu(G) - mu(H)||^p), p in {1, 2}.
KernelMatrix dos_kernel(std::span<const DosFeature> features, double gamma, int p,
                        std::size_t threads = 1);

/// Biased (V-statistic) MMD^2 between the node RPF columns of two graphs under
/// k(x, y) = exp(-base_gamma ||x - y||^2), clipped below at 0.
/// Throws MomentCountMismatch if the RPF degrees differ.
double mmd(const RpfFeature& rpf_g, const RpfFeature& rpf_h, double base_gamma);

/// Pairwise MMD (square root of the clipped MMD^2) between all graphs.
Matrix mmd_distances(std::span<const RpfFeature> rpfs, double base_gamma,
                     std::size_t threads = 1);

/// exp(-gamma * MMD^p).
KernelMatrix ldos_kernel(std::span<const RpfFeature> rpfs, double gamma, int p,
                         double base_gamma, std::size_t threads = 1);

/// w1 Kd o Kl + (w2 / 2) (Kd + Kl). Throws ShapeMismatch.
KernelMatrix composite_kernel(const KernelMatrix& dos, const KernelMatrix& ldos,
                              const CompositeWeights& w);

/// exp(-gamma * D^p) entrywise on a symmetric distance matrix; only the upper
/// triangle is evaluated and mirrored, the diagonal is exactly 1.
Matrix exponential_kernel(const Matrix& distances, double gamma, int p);

struct MedianHeuristic {
  double gamma = 1.0;
  /// Set when no positive distance exists; gamma falls back to 1 then.
  bool all_zero = false;
};

/// gamma = 1 / lower median of the positive values d^p.
MedianHeuristic median_heuristic(std::span<const double> distances, int p);

/// Median heuristic over the strict upper triangle of a distance matrix.
MedianHeuristic median_heuristic(const Matrix& distances, int p);

/// RBF bandwidth for the MMD base kernel: median heuristic (p = 2) over at
/// most max_pairs node pairs sampled across the whole dataset.
MedianHeuristic base_bandwidth(std::span<const RpfFeature> rpfs, std::size_t max_pairs,
                               std::uint64_t seed);

inline constexpr std::size_t kDefaultBandwidthPairs = 10000;

/// Smallest and largest eigenvalue of a symmetric matrix (dense solver).
std::pair<double, double> eigenvalue_range(const Matrix& symmetric);

}  // namespace dosgk
