#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dosgk/error.hpp"
#include "dosgk/features.hpp"
#include "dosgk/kpm.hpp"
#include "support/oracles.hpp"

namespace dosgk {
namespace {

using testing::DenseMatrix;
using testing::dense_of;
using testing::max_abs;

CsrGraph graph_of(Index n, const std::vector<std::pair<Index, Index>>& edges) {
  return normalize(CsrGraph::from_undirected_edges(n, edges));
}

CsrGraph k3() { return graph_of(3, {{0, 1}, {1, 2}, {0, 2}}); }

KpmConfig exact(int moments) {
  KpmConfig cfg;
  cfg.num_moments = moments;
  cfg.probe_kind = ProbeKind::Identity;
  return cfg;
}

TEST(ChebyshevCoefficients, SmallDegrees) {
  const Matrix t2 = chebyshev_coefficients(2);
  EXPECT_EQ(t2, (Matrix{{1, 0, 0}, {0, 1, 0}, {-1, 0, 2}}));
  const Matrix t3 = chebyshev_coefficients(3);
  EXPECT_EQ(t3.row(3), (Matrix{{0, -3, 0, 4}}));
}

TEST(ChebyshevCoefficients, RecurrenceStructure) {
  const Matrix t = chebyshev_coefficients(60);
  for (int m = 0; m <= 60; ++m) {
    // T_m(1) = 1; integer coefficients stay exact in double up to m = 26.
    if (m <= 26) EXPECT_EQ(t.row(m).sum(), 1.0) << m;
    if (m >= 1) EXPECT_EQ(t(m, m), std::ldexp(1.0, m - 1));
    for (int j = m + 1; j <= 60; ++j) EXPECT_EQ(t(m, j), 0.0);
  }
  // Evaluating the coefficients reproduces cos(m arccos x).
  for (double x : {-0.9, 0.2, 0.7}) {
    for (int m = 0; m <= 20; ++m) {
      double value = 0.0, power = 1.0;
      for (int j = 0; j <= m; ++j, power *= x) value += t(m, j) * power;
      EXPECT_NEAR(value, testing::chebyshev_closed_form(m, x), 1e-9);
    }
  }
}

TEST(ChebyshevCoefficients, DegreeTooLarge) {
  try {
    chebyshev_coefficients(61);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooLarge);
  }
  EXPECT_THROW(monomial_in_chebyshev(61), Error);
}

TEST(MonomialInChebyshev, IsExactInverse) {
  for (int k : {0, 1, 5, 30, 50}) {
    const Matrix prod = monomial_in_chebyshev(k) * chebyshev_coefficients(k);
    EXPECT_LE(max_abs(DenseMatrix(prod) - DenseMatrix::Identity(k + 1, k + 1)), 1e-9) << k;
  }
  // x^2 = (T_0 + T_2) / 2.
  const Matrix b = monomial_in_chebyshev(2);
  EXPECT_EQ(b.row(2), (Matrix{{0.5, 0.0, 0.5}}));
}

TEST(ForwardSubstitute, RoundTripOnRandomCoefficients) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss;
  for (int k : {1, 10, 30, 50}) {
    const Matrix t = chebyshev_coefficients(k);
    Matrix c(k + 1, 4);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = gauss(rng);
    const Matrix v = forward_substitute(t, c);
    // Componentwise backward error: |T V - C| against |T| |V|.
    const Matrix scale = t.cwiseAbs() * v.cwiseAbs();
    const Matrix residual = (t * v - c).cwiseAbs();
    EXPECT_LE((residual.array() / scale.array()).maxCoeff(), 1e-12) << k;
  }
}

TEST(MomentsToRpf, TriangleReturnProbabilities) {
  const RpfFeature rpf = moments_to_rpf(estimate_node_moments(k3(), exact(4)));
  for (Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(rpf.V(0, j), 1.0, 1e-15);
    EXPECT_NEAR(rpf.V(1, j), 0.0, 1e-15);
    EXPECT_NEAR(rpf.V(2, j), 0.5, 1e-14);
    EXPECT_NEAR(rpf.V(3, j), 0.25, 1e-14);
  }
  EXPECT_EQ(rpf.degree(), 3);
}

TEST(MomentsToRpf, PathOfTwoIsPeriodic) {
  const RpfFeature rpf = moments_to_rpf(estimate_node_moments(graph_of(2, {{0, 1}}), exact(11)));
  for (int s = 0; s <= 10; ++s) {
    EXPECT_NEAR(rpf.V(s, 0), s % 2 == 0 ? 1.0 : 0.0, 1e-10) << s;
  }
}

TEST(MomentsToRpf, MatchesPowerOracleOnRandomGraphs) {
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(50 + static_cast<std::uint64_t>(seed));
    const Index n = 5 + 10 * seed;
    const CsrGraph a = graph_of(n, testing::random_edges(n, 0.15, rng));
    const RpfFeature rpf = moments_to_rpf(estimate_node_moments(a, exact(51)));
    EXPECT_LE(max_abs(DenseMatrix(rpf.V) - testing::power_diagonals(dense_of(a), 51)), 1e-7) << seed;
  }
}

TEST(MomentsToRpf, MatchesEigendecompositionRpf) {
  std::mt19937_64 rng(77);
  const CsrGraph a = graph_of(30, testing::random_edges(30, 0.2, rng));
  const RpfFeature rpf = moments_to_rpf(estimate_node_moments(a, exact(31)));
  const auto sp = testing::eigen(dense_of(a));
  for (int s = 0; s <= 30; ++s) {
    for (Index j = 0; j < 30; ++j) {
      double p = 0.0;
      for (Eigen::Index i = 0; i < 30; ++i) p += sp.vectors(j, i) * sp.vectors(j, i) * std::pow(sp.values[i], s);
      EXPECT_NEAR(rpf.V(s, j), p, 1e-7);
    }
  }
}

TEST(MomentsToRpf, EvenStepsNonNegativeUnderSampling) {
  std::mt19937_64 rng(5);
  const CsrGraph a = graph_of(40, testing::random_edges(40, 0.2, rng));
  KpmConfig cfg;
  cfg.num_moments = 11;
  cfg.num_probes = 2000;
  cfg.seed = 1;
  const RpfFeature rpf = moments_to_rpf(estimate_node_moments(a, cfg));
  const double eps = 5.0 / std::sqrt(2000.0);
  for (int s = 0; s <= 10; s += 2) EXPECT_GE(rpf.V.row(s).minCoeff(), -eps);
  EXPECT_LE(rpf.V.maxCoeff(), 1.0 + eps);
}

TEST(DosFeature, TriangleAndSingleNode) {
  const DosFeature r = dos_feature(estimate_global_moments(estimate_node_moments(k3(), exact(3))));
  ASSERT_EQ(r.r.size(), 3);
  EXPECT_EQ(r.r[0], 1.0);
  EXPECT_NEAR(r.r[1], 0.0, 1e-15);
  // (1/3)(T_2(1) + 2 T_2(-1/2)) = (1/3)(1 + 2 (-1/2)) = 0.
  EXPECT_NEAR(r.r[2], 0.0, 1e-15);

  const CsrGraph single = normalize(CsrGraph::from_entries(1, {}));
  const DosFeature s = dos_feature(estimate_global_moments(estimate_node_moments(single, exact(6))));
  const std::vector<double> expected{1, 0, -1, 0, 1, 0};
  for (int m = 0; m < 6; ++m) EXPECT_NEAR(s.r[m], expected[m], 1e-15);
}

TEST(DosFeature, WindowAndRangeErrors) {
  SpectralMoments d;
  d.d = Vector::LinSpaced(5, 0.0, 4.0);
  const DosFeature w = dos_feature(d, 1, 3, 9);
  EXPECT_EQ(w.r, Vector::LinSpaced(3, 1.0, 3.0));
  EXPECT_EQ(w.graph_id, 9);
  for (auto [first, last] : {std::pair{0, 5}, std::pair{-1, 2}, std::pair{3, 2}}) {
    try {
      dos_feature(d, first, last);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RangeOutOfBounds);
    }
  }
}

TEST(LdosPlusDos, TriangleExactFeatures) {
  const GraphFeatures f = ldos_plus_dos(k3(), exact(4), 50, 3);
  EXPECT_EQ(f.rpf.degree(), 3);
  EXPECT_NEAR(f.rpf.V(3, 1), 0.25, 1e-14);
  ASSERT_EQ(f.dos.r.size(), 4);
  EXPECT_NEAR(f.dos.r[3], 1.0, 1e-14);  // T_3(-1/2) = 1
  EXPECT_EQ(f.dos.graph_id, 3);
}

TEST(LdosPlusDos, DosIsColumnMeanAndRpfIsCapped) {
  std::mt19937_64 rng(31);
  const CsrGraph a = graph_of(25, testing::random_edges(25, 0.2, rng));
  KpmConfig cfg;
  cfg.num_moments = 81;
  cfg.num_probes = 48;
  cfg.seed = 5;
  cfg.motif_eigenvalues = {-0.25, -1.0 / 3.0, -0.5, 0.0};
  const GraphFeatures f = ldos_plus_dos(a, cfg, 50);
  EXPECT_EQ(f.rpf.degree(), 50);
  EXPECT_EQ(f.dos.r.size(), 81);
  const MotifBasis basis = detect_motifs(a, cfg.motif_eigenvalues);
  const NodeMoments node = estimate_node_moments(a, cfg, basis);
  const SpectralMoments d = estimate_global_moments(node);
  EXPECT_EQ(f.dos.r, d.d);
  // Same seed, second pass: identical output.
  const GraphFeatures g = ldos_plus_dos(a, cfg, 50);
  EXPECT_EQ(g.dos.r, f.dos.r);
  EXPECT_EQ(g.rpf.V, f.rpf.V);
}

TEST(LdosPlusDos, JacksonDampsDosOnly) {
  KpmConfig cfg = exact(6);
  const GraphFeatures plain = ldos_plus_dos(k3(), cfg);
  cfg.jackson = true;
  const GraphFeatures damped = ldos_plus_dos(k3(), cfg);
  EXPECT_EQ(damped.rpf.V, plain.rpf.V);
  for (int m = 0; m < 6; ++m) EXPECT_NEAR(damped.dos.r[m], plain.dos.r[m] * jackson_factor(5, m), 1e-15);
}

TEST(ClampedProbabilities, ClipsToUnitInterval) {
  RpfFeature rpf{Matrix{{1.0, 1.2}, {-0.1, 0.4}}, 0};
  EXPECT_EQ(clamped_probabilities(rpf), (Matrix{{1.0, 1.0}, {0.0, 0.4}}));
}

TEST(SkeelCondition, SmallCases) {
  const ConditionReport k1 = skeel_condition(chebyshev_coefficients(1));
  EXPECT_DOUBLE_EQ(k1.skeel, 1.0);
  EXPECT_DOUBLE_EQ(k1.two_norm, 1.0);
  const ConditionReport k2 = skeel_condition(chebyshev_coefficients(2));
  // |T^-1||T| = [[1,0,0],[0,1,0],[1,0,1]]; |T||T^-1| = [[1,0,0],[0,1,0],[2,0,1]].
  EXPECT_DOUBLE_EQ(k2.skeel, 2.0);
  EXPECT_DOUBLE_EQ(k2.skeel_transposed_order, 3.0);
}

TEST(SkeelCondition, RowScalingInvariance) {
  const Matrix t = chebyshev_coefficients(20);
  Vector scale(21);
  for (int i = 0; i <= 20; ++i) scale[i] = std::ldexp(1.0, -i);
  const Matrix scaled = scale.asDiagonal() * t;
  EXPECT_NEAR(skeel_condition(scaled).skeel / skeel_condition(t).skeel, 1.0, 1e-9);
}

TEST(SkeelCondition, DegreeFiftyIsFarBelowTwoNorm) {
  const ConditionReport r = skeel_condition(chebyshev_coefficients(50));
  EXPECT_LE(r.skeel * 1e3, r.two_norm);
  EXPECT_GT(r.two_norm, 1e15);
}

}  // namespace
}  // namespace dosgk
