#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "dosgk/error.hpp"
#include "dosgk/kpm.hpp"

namespace dosgk {

namespace {

std::uint64_t hash_row(std::span<const Index> cols, std::span<const double> vals,
                       bool with_values) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ cols.size();
  auto mix = [&h](std::uint64_t w) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t k = 0; k < cols.size(); ++k) {
    mix(static_cast<std::uint64_t>(cols[k]));
    if (with_values) mix(std::bit_cast<std::uint64_t>(vals[k]));
  }
  return h;
}

/// Nodes whose keys compare equal, in ascending node order.
template <typename Key, typename Hash, typename Equal>
std::vector<std::vector<Index>> group_nodes(Index n, Key key, Hash hash, Equal equal) {
  std::unordered_map<std::uint64_t, std::vector<std::vector<Index>>> buckets;
  for (Index i = 0; i < n; ++i) {
    auto k = key(i);
    auto& bucket = buckets[hash(k)];
    bool placed = false;
    for (auto& group : bucket) {
      if (equal(key(group.front()), k)) {
        group.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) bucket.push_back({i});
  }
  std::vector<std::vector<Index>> groups;
  for (auto& [h, bucket] : buckets) {
    for (auto& group : bucket) {
      if (group.size() >= 2) groups.push_back(std::move(group));
    }
  }
  std::sort(groups.begin(), groups.end());
  return groups;
}

/// Orthonormal difference vectors spanning {x : sum over the group = 0}.
std::vector<MotifVector> helmert_vectors(const std::vector<Index>& group) {
  std::vector<MotifVector> out;
  for (std::size_t k = 1; k < group.size(); ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
    MotifVector v;
    v.support.assign(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(k + 1));
    v.values.assign(k, scale);
    v.values.push_back(-static_cast<double>(k) * scale);
    out.push_back(std::move(v));
  }
  return out;
}

class ResidualChecker {
 public:
  explicit ResidualChecker(const CsrGraph& g)
      : g_(g), scratch_(static_cast<std::size_t>(g.num_nodes()), 0.0) {}

  /// Returns (Rayleigh quotient, ||A v - lambda v||) with lambda = target.
  std::pair<double, double> check(const MotifVector& v, double target) {
    touched_.clear();
    for (std::size_t s = 0; s < v.support.size(); ++s) {
      const Index node = v.support[s];
      const auto cols = g_.row_cols(node);
      const auto vals = g_.row_values(node);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (scratch_[cols[k]] == 0.0) touched_.push_back(cols[k]);
        scratch_[cols[k]] += vals[k] * v.values[s];
        if (scratch_[cols[k]] == 0.0) scratch_[cols[k]] = kSentinel;
      }
    }
    double rayleigh = 0.0;
    for (std::size_t s = 0; s < v.support.size(); ++s) {
      rayleigh += v.values[s] * value_at(v.support[s]);
    }
    double residual2 = 0.0;
    for (Index node : touched_) {
      const double av = value_at(node);
      const auto it = std::lower_bound(v.support.begin(), v.support.end(), node);
      const double vv = (it != v.support.end() && *it == node)
                            ? v.values[static_cast<std::size_t>(it - v.support.begin())]
                            : 0.0;
      residual2 += (av - target * vv) * (av - target * vv);
    }
    for (std::size_t s = 0; s < v.support.size(); ++s) {
      // Support entries that A v never reached.
      if (scratch_[v.support[s]] == 0.0) residual2 += target * v.values[s] * target * v.values[s];
    }
    for (Index node : touched_) scratch_[node] = 0.0;
    return {rayleigh, std::sqrt(residual2)};
  }

 private:
  // Marks an entry that was touched but cancelled to exactly zero.
  static constexpr double kSentinel = 1e-300;

  double value_at(Index node) const {
    const double x = scratch_[node];
    return x == kSentinel ? 0.0 : x;
  }

  const CsrGraph& g_;
  std::vector<double> scratch_;
  std::vector<Index> touched_;
};

}  // namespace

MotifBasis detect_motifs(const CsrGraph& g, std::span<const double> eigenvalues) {
  if (!g.normalized()) {
    throw Error(ErrorCode::InvalidConfig, "motif detection needs a normalized graph");
  }
  const Index n = g.num_nodes();
  MotifBasis basis;
  basis.num_nodes = n;
  basis.graph_fingerprint = g.fingerprint();
  if (eigenvalues.empty() || n == 0) return basis;

  auto requested = [&](double lambda) -> const double* {
    for (const double& target : eigenvalues) {
      if (std::abs(target - lambda) <= kMotifResidualTolerance) return &target;
    }
    return nullptr;
  };

  std::vector<MotifVector> candidates;

  // Isolated nodes: e_i lies in the kernel.
  for (Index i = 0; i < n; ++i) {
    if (g.row_cols(i).empty()) {
      MotifVector v;
      v.support = {i};
      v.values = {1.0};
      candidates.push_back(std::move(v));
    }
  }

  // Identical open rows (dangling siblings and other false twins).
  {
    auto key = [&](Index i) { return i; };
    auto hash = [&](Index i) { return hash_row(g.row_cols(i), g.row_values(i), true); };
    auto equal = [&](Index a, Index b) {
      const auto ca = g.row_cols(a), cb = g.row_cols(b);
      const auto va = g.row_values(a), vb = g.row_values(b);
      return !ca.empty() && std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()) &&
             std::equal(va.begin(), va.end(), vb.begin(), vb.end());
    };
    for (const auto& group : group_nodes(n, key, hash, equal)) {
      if (g.row_cols(group.front()).empty()) continue;
      for (auto& v : helmert_vectors(group)) candidates.push_back(std::move(v));
    }
  }

  // Identical closed neighborhoods (adjacent twins inside cliques).
  {
    auto closed = [&](Index i) {
      std::vector<Index> nb(g.row_cols(i).begin(), g.row_cols(i).end());
      const auto it = std::lower_bound(nb.begin(), nb.end(), i);
      if (it == nb.end() || *it != i) nb.insert(it, i);
      return nb;
    };
    std::vector<std::vector<Index>> closed_sets(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      if (!g.row_cols(i).empty()) closed_sets[i] = closed(i);
    }
    auto key = [&](Index i) { return i; };
    auto hash = [&](Index i) {
      const auto& s = closed_sets[i];
      return hash_row(s, {}, false);
    };
    auto equal = [&](Index a, Index b) {
      return !closed_sets[a].empty() && closed_sets[a] == closed_sets[b] &&
             g.degree(a) == g.degree(b);
    };
    for (const auto& group : group_nodes(n, key, hash, equal)) {
      if (closed_sets[group.front()].empty()) continue;
      for (auto& v : helmert_vectors(group)) candidates.push_back(std::move(v));
    }
  }

  ResidualChecker checker(g);
  std::vector<std::vector<Index>> owners(static_cast<std::size_t>(n));
  for (MotifVector& v : candidates) {
    const double lambda = checker.check(v, 0.0).first;
    const double* target = requested(lambda);
    if (target == nullptr) continue;

    // Earlier columns sharing support get projected out; template families
    // are disjoint for simple graphs, so this rarely triggers.
    std::vector<Index> overlap;
    for (Index node : v.support) {
      overlap.insert(overlap.end(), owners[node].begin(), owners[node].end());
    }
    std::sort(overlap.begin(), overlap.end());
    overlap.erase(std::unique(overlap.begin(), overlap.end()), overlap.end());
    if (!overlap.empty()) {
      std::unordered_map<Index, double> dense;
      for (std::size_t s = 0; s < v.support.size(); ++s) dense[v.support[s]] = v.values[s];
      for (Index col : overlap) {
        const MotifVector& q = basis.columns[col];
        double dot = 0.0;
        for (std::size_t s = 0; s < q.support.size(); ++s) {
          const auto it = dense.find(q.support[s]);
          if (it != dense.end()) dot += it->second * q.values[s];
        }
        for (std::size_t s = 0; s < q.support.size(); ++s) dense[q.support[s]] -= dot * q.values[s];
      }
      std::vector<std::pair<Index, double>> entries(dense.begin(), dense.end());
      std::sort(entries.begin(), entries.end());
      double norm2 = 0.0;
      for (const auto& [node, x] : entries) norm2 += x * x;
      if (norm2 < 1e-16) continue;
      const double inv = 1.0 / std::sqrt(norm2);
      v.support.clear();
      v.values.clear();
      for (const auto& [node, x] : entries) {
        if (x == 0.0) continue;
        v.support.push_back(node);
        v.values.push_back(x * inv);
      }
    }

    if (checker.check(v, *target).second > kMotifResidualTolerance) continue;
    v.eigenvalue = *target;
    const auto col = static_cast<Index>(basis.columns.size());
    for (Index node : v.support) owners[node].push_back(col);
    ++basis.counts[*target];
    basis.columns.push_back(std::move(v));
  }
  return basis;
}

}  // namespace dosgk
