#include "dosgk/features.hpp"

#include <algorithm>
#include <string>

#include <Eigen/SVD>

#include "dosgk/error.hpp"

namespace dosgk {

namespace {

void check_degree(int k) {
  if (k < 0) throw Error(ErrorCode::RangeOutOfBounds, "negative polynomial degree");
  if (k > kMaxMonomialDegree) {
    throw Error(ErrorCode::DegreeTooLarge,
                "degree " + std::to_string(k) + " exceeds " + std::to_string(kMaxMonomialDegree));
  }
}

double max_abs_row_sum(const Matrix& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::MatrixXd dense = m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues()(0);
}

}  // namespace

Matrix chebyshev_coefficients(int degree_k) {
  check_degree(degree_k);
  Matrix t = Matrix::Zero(degree_k + 1, degree_k + 1);
  t(0, 0) = 1.0;
  if (degree_k >= 1) t(1, 1) = 1.0;
  for (int m = 2; m <= degree_k; ++m) {
    for (int j = 0; j <= m; ++j) {
      const double shifted = j > 0 ? t(m - 1, j - 1) : 0.0;
      t(m, j) = 2.0 * shifted - t(m - 2, j);
    }
  }
  return t;
}

Matrix monomial_in_chebyshev(int degree_k) {
  check_degree(degree_k);
  Matrix b = Matrix::Zero(degree_k + 1, degree_k + 1);
  b(0, 0) = 1.0;
  for (int s = 1; s <= degree_k; ++s) {
    for (int j = 0; j < s; ++j) {
      const double c = b(s - 1, j);
      if (c == 0.0) continue;
      if (j == 0) {
        b(s, 1) += c;
      } else {
        b(s, j + 1) += 0.5 * c;
        b(s, j - 1) += 0.5 * c;
      }
    }
  }
  return b;
}

Matrix forward_substitute(const Matrix& lower, const Matrix& rhs) {
  if (lower.rows() != lower.cols() || lower.rows() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "forward substitution shape mismatch");
  }
  const Eigen::Index k = lower.rows();
  Matrix x(rhs.rows(), rhs.cols());
  for (Eigen::Index s = 0; s < k; ++s) {
    x.row(s) = rhs.row(s);
    for (Eigen::Index j = 0; j < s; ++j) {
      if (lower(s, j) != 0.0) x.row(s) -= lower(s, j) * x.row(j);
    }
    x.row(s) /= lower(s, s);
  }
  return x;
}

RpfFeature moments_to_rpf(const NodeMoments& moments, std::int64_t graph_id) {
  const int k = moments.num_moments() - 1;
  RpfFeature out;
  out.graph_id = graph_id;
  out.V = forward_substitute(chebyshev_coefficients(k), moments.values);
  return out;
}

DosFeature dos_feature(const SpectralMoments& d, int first, int last, std::int64_t graph_id) {
  if (first < 0 || last < first || last >= d.d.size()) {
    throw Error(ErrorCode::RangeOutOfBounds,
                "moment window [" + std::to_string(first) + ", " + std::to_string(last) +
                    "] outside " + std::to_string(d.d.size()) + " moments");
  }
  DosFeature f;
  f.graph_id = graph_id;
  f.r = d.d.segment(first, last - first + 1);
  return f;
}

DosFeature dos_feature(const SpectralMoments& d, std::int64_t graph_id) {
  return dos_feature(d, 0, static_cast<int>(d.d.size()) - 1, graph_id);
}

Matrix clamped_probabilities(const RpfFeature& rpf) {
  return rpf.V.cwiseMax(0.0).cwiseMin(1.0);
}

GraphFeatures ldos_plus_dos(const CsrGraph& g, const KpmConfig& cfg, int rpf_degree,
                            std::int64_t graph_id) {
  KpmConfig node_cfg = cfg;
  node_cfg.jackson = false;
  const MotifBasis basis = detect_motifs(g, cfg.motif_eigenvalues);
  const NodeMoments node = estimate_node_moments(g, node_cfg, basis);

  const int k = std::min(node.num_moments() - 1, rpf_degree);
  NodeMoments local;
  local.config = node.config;
  local.config.num_moments = k + 1;
  local.values = node.values.topRows(k + 1);

  GraphFeatures out;
  out.rpf = moments_to_rpf(local, graph_id);
  SpectralMoments global = estimate_global_moments(node);
  if (cfg.jackson) apply_jackson(global.d, static_cast<int>(global.d.size()) - 1);
  out.dos = dos_feature(global, graph_id);
  return out;
}

ConditionReport skeel_condition(const Matrix& chebyshev_basis) {
  const Eigen::Index k = chebyshev_basis.rows();
  const Matrix inverse = forward_substitute(chebyshev_basis, Matrix::Identity(k, k));
  const Matrix abs_t = chebyshev_basis.cwiseAbs();
  const Matrix abs_inv = inverse.cwiseAbs();
  ConditionReport r;
  r.skeel = max_abs_row_sum(abs_inv * abs_t);
  r.skeel_transposed_order = max_abs_row_sum(abs_t * abs_inv);
  r.two_norm = spectral_norm(chebyshev_basis) * spectral_norm(inverse);
  return r;
}

}  // namespace dosgk
