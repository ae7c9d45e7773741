#include "dosgk/kpm.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <barrier>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "dosgk/error.hpp"

#ifdef __linux__
#include <sys/mman.h>
#endif

namespace dosgk {

namespace {

// Below this many nodes the barrier overhead outweighs any row split.
constexpr Index kMinRowsPerWorker = 2048;

// Probe blocks are gathered at random rows; 2 MiB pages keep TLB misses down
// once a block outgrows the cache.
class ProbeBuffer {
 public:
  explicit ProbeBuffer(std::size_t count) {
    constexpr std::size_t kPage = std::size_t{1} << 21;
    const std::size_t bytes = std::max<std::size_t>(count * sizeof(double), 1);
    const std::size_t padded = (bytes + kPage - 1) / kPage * kPage;
    data_.reset(static_cast<double*>(std::aligned_alloc(kPage, padded)));
    if (!data_) throw std::bad_alloc();
#ifdef MADV_HUGEPAGE
    ::madvise(data_.get(), padded, MADV_HUGEPAGE);
#endif
    std::fill_n(data_.get(), count, 0.0);
  }
  double* data() noexcept { return data_.get(); }

 private:
  struct Free {
    void operator()(double* p) const noexcept { std::free(p); }
  };
  std::unique_ptr<double[], Free> data_;
};

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

void fill_probes(ProbeKind kind, std::uint64_t seed, std::uint64_t stream, std::uint64_t block,
                 Index first_col, Index n, Index width, double* z) {
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(width);
  switch (kind) {
    case ProbeKind::Identity: {
      std::fill(z, z + count, 0.0);
      for (Index c = 0; c < width; ++c) {
        z[static_cast<std::size_t>(first_col + c) * width + c] = 1.0;
      }
      return;
    }
    case ProbeKind::Gaussian: {
      auto rng = block_rng(seed, stream, block);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t k = 0; k < count; ++k) z[k] = normal(rng);
      return;
    }
    case ProbeKind::Rademacher: {
      auto rng = block_rng(seed, stream, block);
      for (std::size_t k = 0; k < count; k += 64) {
        std::uint64_t bits = rng();
        const std::size_t end = std::min(count, k + 64);
        for (std::size_t t = k; t < end; ++t, bits >>= 1) z[t] = (bits & 1U) ? 1.0 : -1.0;
      }
      return;
    }
  }
}

// x <- z - P (P^T z) on one probe block.
void deflate(const MotifBasis& basis, const double* z, double* x, Index n, Index width) {
  const auto w = static_cast<std::size_t>(width);
  std::copy(z, z + static_cast<std::size_t>(n) * w, x);
  std::vector<double> coef(w);
  for (const MotifVector& p : basis.columns) {
    std::fill(coef.begin(), coef.end(), 0.0);
    for (std::size_t s = 0; s < p.support.size(); ++s) {
      const double* row = z + static_cast<std::size_t>(p.support[s]) * w;
      for (std::size_t c = 0; c < w; ++c) coef[c] += p.values[s] * row[c];
    }
    for (std::size_t s = 0; s < p.support.size(); ++s) {
      double* row = x + static_cast<std::size_t>(p.support[s]) * w;
      for (std::size_t c = 0; c < w; ++c) row[c] -= p.values[s] * coef[c];
    }
  }
}

void accumulate_rows(const double* z, const double* w_m, double* num_row, Index width,
                     Index row_begin, Index row_end) noexcept {
  const auto w = static_cast<std::size_t>(width);
  for (Index j = row_begin; j < row_end; ++j) {
    const double* zr = z + static_cast<std::size_t>(j) * w;
    const double* wr = w_m + static_cast<std::size_t>(j) * w;
    double s = 0.0;
    for (std::size_t c = 0; c < w; ++c) s += zr[c] * wr[c];
    num_row[j] += s;
  }
}

void accumulate_norms(const double* z, double* den, Index width, Index row_begin,
                      Index row_end) noexcept {
  const auto w = static_cast<std::size_t>(width);
  for (Index j = row_begin; j < row_end; ++j) {
    const double* zr = z + static_cast<std::size_t>(j) * w;
    double s = 0.0;
    for (std::size_t c = 0; c < w; ++c) s += zr[c] * zr[c];
    den[j] += s;
  }
}

}  // namespace

void KpmConfig::validate() const {
  if (num_moments < 1) throw Error(ErrorCode::InvalidConfig, "num_moments must be >= 1");
  if (num_probes < 1) throw Error(ErrorCode::InvalidConfig, "num_probes must be >= 1");
  for (double lambda : motif_eigenvalues) {
    if (!(lambda >= -1.0 && lambda <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig,
                  "motif eigenvalue " + std::to_string(lambda) + " outside [-1, 1]");
    }
  }
}

Matrix MotifBasis::dense() const {
  Matrix p = Matrix::Zero(num_nodes, rank());
  for (Index c = 0; c < rank(); ++c) {
    const MotifVector& v = columns[c];
    for (std::size_t s = 0; s < v.support.size(); ++s) p(v.support[s], c) = v.values[s];
  }
  return p;
}

std::vector<double> chebyshev_values(double x, int count) {
  std::vector<double> t(static_cast<std::size_t>(std::max(count, 0)));
  if (count > 0) t[0] = 1.0;
  if (count > 1) t[1] = x;
  for (int m = 2; m < count; ++m) t[m] = 2.0 * x * t[m - 1] - t[m - 2];
  return t;
}

NodeMoments estimate_node_moments(const CsrGraph& g, const KpmConfig& cfg) {
  return estimate_node_moments(g, cfg, MotifBasis{g.num_nodes(), g.fingerprint(), {}, {}});
}

NodeMoments estimate_node_moments(const CsrGraph& g, const KpmConfig& cfg,
                                  const MotifBasis& basis) {
  cfg.validate();
  const Index n = g.num_nodes();
  if (!basis.empty() &&
      (basis.num_nodes != n || basis.graph_fingerprint != g.fingerprint())) {
    throw Error(ErrorCode::ConfigMismatch, "motif basis was built from a different graph");
  }

  const int moments = cfg.num_moments;
  const Index probes = cfg.probe_kind == ProbeKind::Identity ? n : cfg.num_probes;

  NodeMoments out;
  out.config = cfg;
  out.config.num_probes = probes;
  out.values = Matrix::Zero(moments, n);
  if (n == 0) return out;

  std::vector<double> den(static_cast<std::size_t>(n), 0.0);
  const Index num_blocks = (probes + kProbeBlockWidth - 1) / kProbeBlockWidth;
  const auto block_size = static_cast<std::size_t>(n) * kProbeBlockWidth;
  ProbeBuffer z(block_size), buf_a(block_size), buf_b(block_size);

  const std::size_t workers =
      std::clamp<std::size_t>(cfg.threads, 1,
                              std::max<std::size_t>(1, static_cast<std::size_t>(n / kMinRowsPerWorker)));

  // Each worker owns a contiguous row range for the whole pass, so the
  // arithmetic per row is identical for any worker count.
  auto run = [&](std::size_t worker, const std::function<void()>& sync) {
    const Index r0 = static_cast<Index>(static_cast<std::int64_t>(n) * worker / workers);
    const Index r1 = static_cast<Index>(static_cast<std::int64_t>(n) * (worker + 1) / workers);
    for (Index block = 0; block < num_blocks; ++block) {
      const Index first = block * kProbeBlockWidth;
      const Index width = std::min(kProbeBlockWidth, probes - first);
      if (worker == 0) {
        fill_probes(cfg.probe_kind, cfg.seed, cfg.stream, static_cast<std::uint64_t>(block), first,
                    n, width, z.data());
        deflate(basis, z.data(), buf_a.data(), n, width);
      }
      sync();
      double* prev = buf_a.data();
      double* cur = buf_b.data();
      accumulate_norms(z.data(), den.data(), width, r0, r1);
      accumulate_rows(z.data(), prev, out.values.row(0).data(), width, r0, r1);
      if (moments > 1) {
        kernel::spmv_rows(g, prev, cur, width, r0, r1);
        accumulate_rows(z.data(), cur, out.values.row(1).data(), width, r0, r1);
      }
      for (int m = 2; m < moments; ++m) {
        sync();
        kernel::chebyshev_step_dot_rows(g, cur, prev, z.data(), out.values.row(m).data(), width, r0, r1);
        std::swap(prev, cur);
      }
      sync();
    }
  };

  if (workers == 1) {
    run(0, [] {});
  } else {
    std::barrier sync_point(static_cast<std::ptrdiff_t>(workers));
    auto sync = [&sync_point] { sync_point.arrive_and_wait(); };
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back([&, t] { run(t, sync); });
    run(0, sync);
  }

  for (Index j = 0; j < n; ++j) {
    const double scale = den[j] > 0.0 ? 1.0 / den[j] : 0.0;
    out.values.col(j) *= scale;
  }

  for (const MotifVector& p : basis.columns) {
    const auto t = chebyshev_values(p.eigenvalue, moments);
    for (std::size_t s = 0; s < p.support.size(); ++s) {
      const double weight = p.values[s] * p.values[s];
      for (int m = 0; m < moments; ++m) out.values(m, p.support[s]) += t[m] * weight;
    }
  }

  if (cfg.jackson) apply_jackson(out.values, moments - 1);
  out.values.row(0).setOnes();
  return out;
}

SpectralMoments estimate_global_moments(const NodeMoments& node) {
  SpectralMoments s;
  const Index n = node.num_nodes();
  s.d = Vector::Zero(node.num_moments());
  if (n > 0) {
    for (int m = 0; m < node.num_moments(); ++m) s.d[m] = node.values.row(m).sum() / n;
  }
  if (s.d.size() > 0) s.d[0] = 1.0;
  return s;
}

double jackson_factor(int degree_m, int k) noexcept {
  const double big_m = degree_m;
  const double alpha = std::numbers::pi / (big_m + 2.0);
  return (big_m + 1.0 - k) * std::cos(k * alpha) / (big_m + 2.0) +
         std::sin((k + 1.0) * alpha) / ((big_m + 2.0) * std::sin(alpha));
}

void apply_jackson(Matrix& moments, int degree_m) {
  if (moments.rows() != degree_m + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "Jackson damping of degree " + std::to_string(degree_m) + " needs " +
                    std::to_string(degree_m + 1) + " rows, got " + std::to_string(moments.rows()));
  }
  for (int k = 0; k <= degree_m; ++k) moments.row(k) *= jackson_factor(degree_m, k);
}

void apply_jackson(Vector& moments, int degree_m) {
  if (moments.size() != degree_m + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "Jackson damping of degree " + std::to_string(degree_m) + " needs " +
                    std::to_string(degree_m + 1) + " entries, got " +
                    std::to_string(moments.size()));
  }
  for (int k = 0; k <= degree_m; ++k) moments[k] *= jackson_factor(degree_m, k);
}

}  // namespace dosgk
