#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dosgk {

using Index = std::int32_t;

/// Dense row-major block. Probe blocks, moment matrices and Gram matrices all
/// use this layout so that one row is contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Entry {
  Index row;
  Index col;
  double value;
};

/// Sparse symmetric matrix in compressed-row form with both (i,j) and (j,i)
/// stored. Immutable after construction and safe to share across threads.
class CsrGraph {
 public:
  CsrGraph() = default;

  /// Builds from directed entries exactly as given. Repeated (i,j) pairs are
  /// summed into one entry. No symmetry check happens here; normalize() does it.
  static CsrGraph from_entries(Index n, std::vector<Entry> entries);

  /// Unit-weight undirected edges; each pair is inserted in both directions.
  static CsrGraph from_undirected_edges(Index n,
                                        std::span<const std::pair<Index, Index>> edges);

  Index num_nodes() const noexcept { return n_; }
  std::int64_t num_entries() const noexcept { return static_cast<std::int64_t>(col_idx_.size()); }
  /// Undirected edge count |E|, self-loops counted once.
  std::int64_t num_edges() const noexcept;
  bool normalized() const noexcept { return normalized_; }

  std::span<const std::int64_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const noexcept;
  std::span<const double> row_values(Index i) const noexcept;

  /// Weighted degree, i.e. the row sum.
  double degree(Index i) const noexcept;
  /// Stored value of entry (i,j), 0 if absent.
  double value(Index i, Index j) const noexcept;
  Index num_isolated() const noexcept;
  bool has_self_loops() const noexcept;

  /// Structural and numeric hash, used to tie derived data (motif bases) to
  /// the graph it was computed from.
  std::uint64_t fingerprint() const noexcept;

  /// Dense copy for oracles and diagnostics on small graphs.
  Matrix to_dense() const;

 private:
  friend CsrGraph normalize_impl(const CsrGraph&, bool);
  CsrGraph(Index n, std::vector<std::int64_t> row_ptr, std::vector<Index> col_idx,
           std::vector<double> values, bool normalized);

  Index n_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
  bool normalized_ = false;
};

enum class IsolatedNodePolicy {
  KeepZeroRow,  // degree-0 nodes stay, their normalized row is empty
  Drop,         // degree-0 nodes are removed and the rest renumbered
};

/// D^{-1/2} A D^{-1/2}. Throws AsymmetricInput if |a_ij - a_ji| > 1e-12 and
/// NegativeWeight for any negative entry.
CsrGraph normalize(const CsrGraph& adjacency,
                   IsolatedNodePolicy policy = IsolatedNodePolicy::KeepZeroRow);

/// Y = A X column by column. X must have num_nodes() rows.
Matrix spmv(const CsrGraph& g, const Matrix& x);

namespace kernel {

/// y[rows, :] = A x[rows, :] on raw row-major blocks of the given width.
void spmv_rows(const CsrGraph& g, const double* x, double* y, Index width,
               Index row_begin, Index row_end) noexcept;

/// prev[rows, :] = 2 A cur[rows, :] - prev[rows, :]; the Chebyshev step fused
/// into one sweep so that W_{m+1} overwrites W_{m-1} in place.
void chebyshev_step_rows(const CsrGraph& g, const double* cur, double* prev, Index width,
                         Index row_begin, Index row_end) noexcept;

/// The same step followed, row by row, by num_row[i] += <z[i, :], prev[i, :]>.
void chebyshev_step_dot_rows(const CsrGraph& g, const double* cur, double* prev, const double* z,
                             double* num_row, Index width, Index row_begin, Index row_end) noexcept;

}  // namespace kernel

}  // namespace dosgk
