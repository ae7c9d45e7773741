#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dosgk/graph.hpp"

namespace dosgk {

enum class ProbeKind {
  Gaussian,    // i.i.d. N(0, 1) entries
  Rademacher,  // i.i.d. +-1 entries
  Identity,    // Z = I, N_z = n; exact diagonals, for tests and tiny graphs
};

/// Parameters of one stochastic Chebyshev moment pass.
struct KpmConfig {
  /// Number of moment rows, i.e. S + 1 for moments T_0 .. T_S.
  int num_moments = 51;
  /// N_z. Ignored for ProbeKind::Identity, which always uses n probes.
  int num_probes = 2000;
  ProbeKind probe_kind = ProbeKind::Gaussian;
  /// Scale row m by the Jackson factor g_m with M = num_moments - 1.
  bool jackson = false;
  /// Spike eigenvalues to deflate out of the probes and add back exactly.
  std::vector<double> motif_eigenvalues;
  std::uint64_t seed = 0;
  /// Per-graph stream id (dataset index), combined with seed for the probe RNG.
  std::uint64_t stream = 0;
  /// Row-partitioned workers inside one graph; 1 runs serially. Results do not
  /// depend on this value.
  std::size_t threads = 1;

  /// Throws InvalidConfig on num_moments < 1, num_probes < 1 or an
  /// eigenvalue outside [-1, 1].
  void validate() const;
};

/// Probe columns are drawn and propagated in blocks of this width. Part of the
/// RNG stream definition: changing it changes the sampled probes.
inline constexpr Index kProbeBlockWidth = 16;

/// values(m, j) estimates T_m(A)_jj.
struct NodeMoments {
  Matrix values;
  KpmConfig config;

  Index num_nodes() const noexcept { return static_cast<Index>(values.cols()); }
  int num_moments() const noexcept { return static_cast<int>(values.rows()); }
};

/// d[m] estimates (1/n) Tr T_m(A), the m-th Chebyshev moment of the DOS.
struct SpectralMoments {
  Vector d;
};

/// One sparse orthonormal column of the motif basis P.
struct MotifVector {
  std::vector<Index> support;  // sorted node ids
  std::vector<double> values;
  double eigenvalue = 0.0;
};

struct MotifBasis {
  Index num_nodes = 0;
  std::uint64_t graph_fingerprint = 0;
  std::vector<MotifVector> columns;
  /// Multiplicity of every filtered eigenvalue.
  std::map<double, Index> counts;

  Index rank() const noexcept { return static_cast<Index>(columns.size()); }
  bool empty() const noexcept { return columns.empty(); }
  /// n x r dense copy of P.
  Matrix dense() const;
};

/// An eigenvector candidate is kept only if ||A v - lambda v||_2 stays below this.
inline constexpr double kMotifResidualTolerance = 1e-10;

/// Finds exact eigenvectors of the normalized adjacency for the requested
/// eigenvalues from hashed local templates:
///   * nodes with identical rows (same neighbors, same weights) give
///     difference vectors with eigenvalue 0; isolated nodes give e_i;
///   * adjacent nodes with identical closed neighborhoods give difference
///     vectors with eigenvalue a_ii - a_ij (-1/d for unweighted degree d).
/// Every candidate is residual-checked before it enters the basis.
MotifBasis detect_motifs(const CsrGraph& g, std::span<const double> eigenvalues);

/// Normalized Hutchinson estimate of diag T_m(A), m = 0 .. num_moments - 1,
/// with motif deflation Z <- (I - P P^T) Z and exact add-back of the filtered
/// part. Row 0 is set to exactly 1. Throws ConfigMismatch when the basis was
/// built from another graph.
NodeMoments estimate_node_moments(const CsrGraph& g, const KpmConfig& cfg,
                                  const MotifBasis& basis);

/// Convenience overload without motif filtering.
NodeMoments estimate_node_moments(const CsrGraph& g, const KpmConfig& cfg);

/// Column mean of the node moments; d[0] = 1.
SpectralMoments estimate_global_moments(const NodeMoments& node);

/// Jackson factor g_k for a truncation at degree M (moments k = 0 .. M).
double jackson_factor(int degree_m, int k) noexcept;

/// Multiplies row k of `moments` by jackson_factor(M, k). Requires M + 1 rows.
void apply_jackson(Matrix& moments, int degree_m);
void apply_jackson(Vector& moments, int degree_m);

/// T_m(x) for m = 0 .. count - 1 by the three-term recurrence.
std::vector<double> chebyshev_values(double x, int count);

}  // namespace dosgk
