#include "dosgk/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dosgk/error.hpp"

namespace dosgk {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void mix(std::uint64_t word) noexcept {
    for (int i = 0; i < 8; ++i) {
      state ^= (word >> (8 * i)) & 0xffU;
      state *= 0x100000001b3ULL;
    }
  }
};

}  // namespace

CsrGraph::CsrGraph(Index n, std::vector<std::int64_t> row_ptr, std::vector<Index> col_idx,
                   std::vector<double> values, bool normalized)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)),
      normalized_(normalized) {}

CsrGraph CsrGraph::from_entries(Index n, std::vector<Entry> entries) {
  if (n < 0) throw Error(ErrorCode::DimensionMismatch, "negative node count");
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                      ") outside a graph of " + std::to_string(n) + " nodes");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const Entry& first = entries[k];
    double sum = 0.0;
    while (k < entries.size() && entries[k].row == first.row && entries[k].col == first.col) {
      sum += entries[k].value;
      ++k;
    }
    if (sum == 0.0) continue;
    cols.push_back(first.col);
    vals.push_back(sum);
    ++row_ptr[static_cast<std::size_t>(first.row) + 1];
  }
  for (Index i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrGraph(n, std::move(row_ptr), std::move(cols), std::move(vals), false);
}

CsrGraph CsrGraph::from_undirected_edges(Index n,
                                         std::span<const std::pair<Index, Index>> edges) {
  std::vector<Entry> entries;
  entries.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    entries.push_back({u, v, 1.0});
    if (u != v) entries.push_back({v, u, 1.0});
  }
  return from_entries(n, std::move(entries));
}

std::int64_t CsrGraph::num_edges() const noexcept {
  std::int64_t loops = 0;
  for (Index i = 0; i < n_; ++i) {
    for (Index j : row_cols(i)) loops += (j == i);
  }
  return (num_entries() - loops) / 2 + loops;
}

std::span<const Index> CsrGraph::row_cols(Index i) const noexcept {
  const auto b = static_cast<std::size_t>(row_ptr_[i]);
  const auto e = static_cast<std::size_t>(row_ptr_[i + 1]);
  return {col_idx_.data() + b, e - b};
}

std::span<const double> CsrGraph::row_values(Index i) const noexcept {
  const auto b = static_cast<std::size_t>(row_ptr_[i]);
  const auto e = static_cast<std::size_t>(row_ptr_[i + 1]);
  return {values_.data() + b, e - b};
}

double CsrGraph::degree(Index i) const noexcept {
  double d = 0.0;
  for (double w : row_values(i)) d += w;
  return d;
}

double CsrGraph::value(Index i, Index j) const noexcept {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

Index CsrGraph::num_isolated() const noexcept {
  Index count = 0;
  for (Index i = 0; i < n_; ++i) count += (row_ptr_[i] == row_ptr_[i + 1]);
  return count;
}

bool CsrGraph::has_self_loops() const noexcept {
  for (Index i = 0; i < n_; ++i) {
    const auto cols = row_cols(i);
    if (std::binary_search(cols.begin(), cols.end(), i)) return true;
  }
  return false;
}

std::uint64_t CsrGraph::fingerprint() const noexcept {
  Fnv1a h;
  h.mix(static_cast<std::uint64_t>(n_));
  h.mix(normalized_ ? 1U : 0U);
  for (std::int64_t p : row_ptr_) h.mix(static_cast<std::uint64_t>(p));
  for (Index c : col_idx_) h.mix(static_cast<std::uint64_t>(c));
  for (double v : values_) h.mix(std::bit_cast<std::uint64_t>(v));
  return h.state;
}

Matrix CsrGraph::to_dense() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) a(i, cols[k]) = vals[k];
  }
  return a;
}

CsrGraph normalize_impl(const CsrGraph& a, bool drop_isolated) {
  const Index n = a.num_nodes();
  for (Index i = 0; i < n; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (vals[k] < 0.0) {
        throw Error(ErrorCode::NegativeWeight,
                    "entry (" + std::to_string(i) + "," + std::to_string(cols[k]) + ") is negative");
      }
      const double mirror = a.value(cols[k], i);
      if (std::abs(mirror - vals[k]) > kSymmetryTolerance) {
        throw Error(ErrorCode::AsymmetricInput,
                    "entry (" + std::to_string(i) + "," + std::to_string(cols[k]) +
                        ") has no matching transpose entry");
      }
    }
  }

  std::vector<double> inv_sqrt_degree(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    const double d = a.degree(i);
    if (d > 0.0) inv_sqrt_degree[i] = 1.0 / std::sqrt(d);
  }

  std::vector<Index> new_id(static_cast<std::size_t>(n));
  Index kept = 0;
  for (Index i = 0; i < n; ++i) {
    const bool isolated = a.row_cols(i).empty();
    new_id[i] = (drop_isolated && isolated) ? -1 : kept++;
  }

  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(kept) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(static_cast<std::size_t>(a.num_entries()));
  vals.reserve(static_cast<std::size_t>(a.num_entries()));
  for (Index i = 0; i < n; ++i) {
    if (new_id[i] < 0) continue;
    const auto rc = a.row_cols(i);
    const auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      cols.push_back(new_id[rc[k]]);
      vals.push_back(rv[k] * inv_sqrt_degree[i] * inv_sqrt_degree[rc[k]]);
    }
    row_ptr[new_id[i] + 1] = static_cast<std::int64_t>(cols.size());
  }
  return CsrGraph(kept, std::move(row_ptr), std::move(cols), std::move(vals), true);
}

CsrGraph normalize(const CsrGraph& adjacency, IsolatedNodePolicy policy) {
  return normalize_impl(adjacency, policy == IsolatedNodePolicy::Drop);
}

Matrix spmv(const CsrGraph& g, const Matrix& x) {
  if (x.rows() != g.num_nodes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "block has " + std::to_string(x.rows()) + " rows, graph has " +
                    std::to_string(g.num_nodes()) + " nodes");
  }
  Matrix y(x.rows(), x.cols());
  if (x.size() > 0) {
    kernel::spmv_rows(g, x.data(), y.data(), static_cast<Index>(x.cols()), 0, g.num_nodes());
  }
  return y;
}

namespace kernel {

void spmv_rows(const CsrGraph& g, const double* x, double* y, Index width, Index row_begin,
               Index row_end) noexcept {
  const auto row_ptr = g.row_ptr();
  const auto col_idx = g.col_idx();
  const auto values = g.values();
  const auto w = static_cast<std::size_t>(width);
  for (Index i = row_begin; i < row_end; ++i) {
    double* out = y + static_cast<std::size_t>(i) * w;
    std::fill(out, out + w, 0.0);
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double a = values[k];
      const double* in = x + static_cast<std::size_t>(col_idx[k]) * w;
      for (std::size_t c = 0; c < w; ++c) out[c] += a * in[c];
    }
  }
}

namespace {

// Entries looked ahead when prefetching gathered rows.
constexpr std::int64_t kPrefetchDistance = 16;

// With z set, num_row[i] += <z[i, :], new row i> right after the row is written.
template <std::size_t W>
void chebyshev_step_fixed(const CsrGraph& g, const double* cur, double* prev, const double* z,
                          double* num_row, Index row_begin, Index row_end) noexcept {
  const auto row_ptr = g.row_ptr();
  const auto col_idx = g.col_idx();
  const auto values = g.values();
  const std::int64_t nnz = g.num_entries();
  for (Index i = row_begin; i < row_end; ++i) {
    double acc[W] = {};
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (k + kPrefetchDistance < nnz) {
        const double* ahead = cur + static_cast<std::size_t>(col_idx[k + kPrefetchDistance]) * W;
        for (std::size_t line = 0; line < W; line += 8) __builtin_prefetch(ahead + line);
      }
      const double a = values[k];
      const double* in = cur + static_cast<std::size_t>(col_idx[k]) * W;
      for (std::size_t c = 0; c < W; ++c) acc[c] += a * in[c];
    }
    double* out = prev + static_cast<std::size_t>(i) * W;
    for (std::size_t c = 0; c < W; ++c) out[c] = 2.0 * acc[c] - out[c];
    if (z != nullptr) {
      const double* zr = z + static_cast<std::size_t>(i) * W;
      double s = 0.0;
      for (std::size_t c = 0; c < W; ++c) s += zr[c] * out[c];
      num_row[i] += s;
    }
  }
}

}  // namespace

void chebyshev_step_rows(const CsrGraph& g, const double* cur, double* prev, Index width,
                         Index row_begin, Index row_end) noexcept {
  if (width == 16) {
    chebyshev_step_fixed<16>(g, cur, prev, nullptr, nullptr, row_begin, row_end);
    return;
  }
  const auto row_ptr = g.row_ptr();
  const auto col_idx = g.col_idx();
  const auto values = g.values();
  const auto w = static_cast<std::size_t>(width);
  constexpr std::size_t kMaxLocal = 64;
  double acc[kMaxLocal];
  for (Index i = row_begin; i < row_end; ++i) {
    double* out = prev + static_cast<std::size_t>(i) * w;
    for (std::size_t c0 = 0; c0 < w; c0 += kMaxLocal) {
      const std::size_t cw = std::min(kMaxLocal, w - c0);
      std::fill(acc, acc + cw, 0.0);
      for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        const double a = values[k];
        const double* in = cur + static_cast<std::size_t>(col_idx[k]) * w + c0;
        for (std::size_t c = 0; c < cw; ++c) acc[c] += a * in[c];
      }
      for (std::size_t c = 0; c < cw; ++c) out[c0 + c] = 2.0 * acc[c] - out[c0 + c];
    }
  }
}

void chebyshev_step_dot_rows(const CsrGraph& g, const double* cur, double* prev, const double* z,
                             double* num_row, Index width, Index row_begin, Index row_end) noexcept {
  if (width == 16) {
    chebyshev_step_fixed<16>(g, cur, prev, z, num_row, row_begin, row_end);
    return;
  }
  chebyshev_step_rows(g, cur, prev, width, row_begin, row_end);
  const auto w = static_cast<std::size_t>(width);
  for (Index i = row_begin; i < row_end; ++i) {
    const double* zr = z + static_cast<std::size_t>(i) * w;
    const double* out = prev + static_cast<std::size_t>(i) * w;
    double s = 0.0;
    for (std::size_t c = 0; c < w; ++c) s += zr[c] * out[c];
    num_row[i] += s;
  }
}

}  // namespace kernel

}  // namespace dosgk
