#include "dosgk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "dosgk/error.hpp"
#include "dosgk/parallel.hpp"

namespace dosgk {

namespace {

void check_p(int p) {
  if (p != 1 && p != 2) throw Error(ErrorCode::InvalidConfig, "p must be 1 or 2");
}

double power(double distance, int p) { return p == 1 ? distance : distance * distance; }

/// (1 / (n_g n_h)) 1^T K_GH 1 for the RBF base kernel over RPF columns.
double mean_cross_kernel(const Matrix& g, const Matrix& h, double base_gamma) {
  if (g.cols() == 0 || h.cols() == 0) return 0.0;
  const Eigen::RowVectorXd ng = g.colwise().squaredNorm();
  const Eigen::RowVectorXd nh = h.colwise().squaredNorm();
  const Eigen::MatrixXd cross = g.transpose() * h;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < cross.rows(); ++i) {
    for (Eigen::Index j = 0; j < cross.cols(); ++j) {
      const double d2 = std::max(0.0, ng[i] + nh[j] - 2.0 * cross(i, j));
      sum += std::exp(-base_gamma * d2);
    }
  }
  return sum / (static_cast<double>(g.cols()) * static_cast<double>(h.cols()));
}

}  // namespace

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Dos: return "dos";
    case KernelKind::Ldos: return "ldos";
    case KernelKind::Composite: return "composite";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "dos") return KernelKind::Dos;
  if (name == "ldos") return KernelKind::Ldos;
  if (name == "composite") return KernelKind::Composite;
  throw Error(ErrorCode::InvalidConfig, "unknown kernel kind '" + std::string(name) + "'");
}

CompositeWeights CompositeWeights::from_w1(double w1) {
  CompositeWeights w{w1, 1.0 - w1};
  w.validate();
  return w;
}

void CompositeWeights::validate() const {
  if (w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidConfig, "composite weights must be nonnegative and sum to 1");
  }
}

Matrix dos_distances(std::span<const DosFeature> features, std::size_t threads) {
  const auto m = static_cast<Eigen::Index>(features.size());
  for (const DosFeature& f : features) {
    if (f.r.size() != features.front().r.size()) {
      throw Error(ErrorCode::LengthMismatch, "DOS features have different lengths");
    }
  }
  Matrix d = Matrix::Zero(m, m);
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = ii + 1; j < m; ++j) {
      d(ii, j) = (features[i].r - features[static_cast<std::size_t>(j)].r).norm();
    }
  });
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d(j, i) = d(i, j);
  }
  return d;
}

Matrix exponential_kernel(const Matrix& distances, double gamma, int p) {
  check_p(p);
  const Eigen::Index m = distances.rows();
  Matrix k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      k(i, j) = std::exp(-gamma * power(distances(i, j), p));
      k(j, i) = k(i, j);
    }
  }
  return k;
}

KernelMatrix dos_kernel(std::span<const DosFeature> features, double gamma, int p,
                        std::size_t threads) {
  check_p(p);
  KernelMatrix out;
  out.K = exponential_kernel(dos_distances(features, threads), gamma, p);
  out.params.kind = KernelKind::Dos;
  out.params.gamma = gamma;
  out.params.dos_gamma = gamma;
  out.params.p = p;
  return out;
}

double mmd(const RpfFeature& rpf_g, const RpfFeature& rpf_h, double base_gamma) {
  if (rpf_g.V.rows() != rpf_h.V.rows()) {
    throw Error(ErrorCode::MomentCountMismatch, "RPF features have different walk lengths");
  }
  const double value = mean_cross_kernel(rpf_g.V, rpf_g.V, base_gamma) +
                       mean_cross_kernel(rpf_h.V, rpf_h.V, base_gamma) -
                       2.0 * mean_cross_kernel(rpf_g.V, rpf_h.V, base_gamma);
  return std::max(0.0, value);
}

Matrix mmd_distances(std::span<const RpfFeature> rpfs, double base_gamma, std::size_t threads) {
  const auto m = static_cast<Eigen::Index>(rpfs.size());
  for (const RpfFeature& r : rpfs) {
    if (r.V.rows() != rpfs.front().V.rows()) {
      throw Error(ErrorCode::MomentCountMismatch, "RPF features have different walk lengths");
    }
  }
  std::vector<double> self(rpfs.size());
  parallel_for(rpfs.size(), threads, [&](std::size_t i) {
    self[i] = mean_cross_kernel(rpfs[i].V, rpfs[i].V, base_gamma);
  });
  Matrix d = Matrix::Zero(m, m);
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = ii + 1; j < m; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const double cross = mean_cross_kernel(rpfs[i].V, rpfs[jj].V, base_gamma);
      d(ii, j) = std::sqrt(std::max(0.0, self[i] + self[jj] - 2.0 * cross));
    }
  });
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d(j, i) = d(i, j);
  }
  return d;
}

KernelMatrix ldos_kernel(std::span<const RpfFeature> rpfs, double gamma, int p,
                         double base_gamma, std::size_t threads) {
  check_p(p);
  KernelMatrix out;
  out.K = exponential_kernel(mmd_distances(rpfs, base_gamma, threads), gamma, p);
  out.params.kind = KernelKind::Ldos;
  out.params.gamma = gamma;
  out.params.ldos_gamma = gamma;
  out.params.p = p;
  out.params.base_gamma = base_gamma;
  return out;
}

KernelMatrix composite_kernel(const KernelMatrix& dos, const KernelMatrix& ldos,
                              const CompositeWeights& w) {
  w.validate();
  if (dos.K.rows() != ldos.K.rows() || dos.K.cols() != ldos.K.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "composite inputs have different shapes");
  }
  KernelMatrix out;
  out.K = w.w1 * dos.K.cwiseProduct(ldos.K) + (w.w2 / 2.0) * (dos.K + ldos.K);
  out.params = ldos.params;
  out.params.kind = KernelKind::Composite;
  out.params.weights = w;
  out.params.dos_gamma = dos.params.gamma;
  out.params.ldos_gamma = ldos.params.gamma;
  out.params.gamma = 0.0;
  return out;
}

MedianHeuristic median_heuristic(std::span<const double> distances, int p) {
  check_p(p);
  std::vector<double> positive;
  positive.reserve(distances.size());
  for (double d : distances) {
    if (d > 0.0) positive.push_back(power(d, p));
  }
  if (positive.empty()) return {1.0, true};
  const auto mid = positive.begin() + static_cast<std::ptrdiff_t>((positive.size() - 1) / 2);
  std::nth_element(positive.begin(), mid, positive.end());
  return {1.0 / *mid, false};
}

MedianHeuristic median_heuristic(const Matrix& distances, int p) {
  std::vector<double> upper;
  const Eigen::Index m = distances.rows();
  upper.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) upper.push_back(distances(i, j));
  }
  return median_heuristic(upper, p);
}

MedianHeuristic base_bandwidth(std::span<const RpfFeature> rpfs, std::size_t max_pairs,
                               std::uint64_t seed) {
  std::vector<std::size_t> nonempty;
  for (std::size_t i = 0; i < rpfs.size(); ++i) {
    if (rpfs[i].num_nodes() > 0) nonempty.push_back(i);
  }
  if (nonempty.empty() || max_pairs == 0) return {1.0, true};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_graph(0, nonempty.size() - 1);
  std::vector<double> distances;
  distances.reserve(max_pairs);
  for (std::size_t t = 0; t < max_pairs; ++t) {
    const RpfFeature& a = rpfs[nonempty[pick_graph(rng)]];
    const RpfFeature& b = rpfs[nonempty[pick_graph(rng)]];
    std::uniform_int_distribution<Index> pick_a(0, a.num_nodes() - 1);
    std::uniform_int_distribution<Index> pick_b(0, b.num_nodes() - 1);
    const Index i = pick_a(rng);
    const Index j = pick_b(rng);
    distances.push_back((a.V.col(i) - b.V.col(j)).norm());
  }
  return median_heuristic(distances, 2);
}

std::pair<double, double> eigenvalue_range(const Matrix& symmetric) {
  Eigen::MatrixXd dense = symmetric;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace dosgk
