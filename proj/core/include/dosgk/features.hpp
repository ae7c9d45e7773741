#pragma once

#include <cstdint>
#include <utility>

#include "dosgk/graph.hpp"
#include "dosgk/kpm.hpp"

namespace dosgk {

/// Largest degree accepted for the Chebyshev-to-monomial change of basis.
inline constexpr int kMaxMonomialDegree = 60;
/// Random-walk length used for return probability features by default.
inline constexpr int kDefaultRpfDegree = 50;

/// Global DOS embedding: r[m] = integral of T_m against the spectral measure.
struct DosFeature {
  Vector r;
  std::int64_t graph_id = 0;
};

/// V(s, j) = probability that an s-step walk from node j returns to j.
struct RpfFeature {
  Matrix V;
  std::int64_t graph_id = 0;

  int degree() const noexcept { return static_cast<int>(V.rows()) - 1; }
  Index num_nodes() const noexcept { return static_cast<Index>(V.cols()); }
};

/// Lower-triangular (k+1) x (k+1) matrix, T(m, j) = coefficient of x^j in T_m.
/// Throws DegreeTooLarge for k > kMaxMonomialDegree.
Matrix chebyshev_coefficients(int degree_k);

/// B(s, j) = coefficient of T_j in x^s, built from x T_j = (T_{j+1} + T_{j-1}) / 2.
/// This is the exact inverse of chebyshev_coefficients(k).
Matrix monomial_in_chebyshev(int degree_k);

/// Solves T V = C column by column by forward substitution.
Matrix forward_substitute(const Matrix& lower, const Matrix& rhs);

/// Converts Chebyshev node moments to monomial moments [A^s]_jj.
RpfFeature moments_to_rpf(const NodeMoments& moments, std::int64_t graph_id = 0);

/// Copies moments [first, last] (inclusive) into the embedding.
DosFeature dos_feature(const SpectralMoments& d, int first, int last, std::int64_t graph_id = 0);
DosFeature dos_feature(const SpectralMoments& d, std::int64_t graph_id = 0);

/// Return probabilities clamped to [0, 1], for human-readable export only.
Matrix clamped_probabilities(const RpfFeature& rpf);

struct GraphFeatures {
  RpfFeature rpf;
  DosFeature dos;
};

/// One KPM pass feeding both features. Node moments are computed without
/// damping; the RPF uses the first min(cfg.num_moments - 1, rpf_degree) + 1
/// rows; the DOS averages every row and is Jackson-damped when cfg.jackson.
GraphFeatures ldos_plus_dos(const CsrGraph& g, const KpmConfig& cfg,
                            int rpf_degree = kDefaultRpfDegree, std::int64_t graph_id = 0);

struct ConditionReport {
  /// || |T^-1| |T| ||_inf, invariant under row scaling of T.
  double skeel = 0.0;
  /// || |T| |T^-1| ||_inf, the operand order as it is sometimes printed.
  double skeel_transposed_order = 0.0;
  /// ||T||_2 ||T^-1||_2.
  double two_norm = 0.0;
};

/// Conditioning diagnostics of the Chebyshev basis matrix.
ConditionReport skeel_condition(const Matrix& chebyshev_basis);

}  // namespace dosgk
