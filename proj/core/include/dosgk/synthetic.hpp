#pragma once

#include <cstdint>
#include <random>

#include "dosgk/graph.hpp"

namespace dosgk::synthetic {

/// G(n, p): each unordered pair is an edge independently with probability p.
CsrGraph erdos_renyi(Index n, double p, std::mt19937_64& rng);

/// Preferential attachment: starts from a clique on m + 1 nodes, then each
/// new node links to m distinct earlier nodes chosen proportionally to degree.
/// Average degree stays close to 2m, so |E| grows linearly in n.
CsrGraph preferential_attachment(Index n, Index m, std::mt19937_64& rng);

/// Circulant graph: node i links to i +- 1, ..., i +- half_degree (mod n).
/// Every node has degree 2 half_degree when n > 2 half_degree.
CsrGraph circulant(Index n, Index half_degree);

/// Configuration-model graph with all stub counts equal to `degree`. Self
/// pairings and repeated pairs are dropped, so a few nodes end slightly lower.
CsrGraph random_regular(Index n, Index degree, std::mt19937_64& rng);

/// Random graph carrying duplicated neighbourhoods: a connected G(n, p) core
/// plus nodes that copy the neighbour set of an existing node, either as a
/// non-adjacent copy or as an adjacent copy (the copy and the original are
/// then joined to each other).
CsrGraph with_twins(Index core_nodes, double p, Index false_twins, Index true_twins,
                    std::mt19937_64& rng);

}  // namespace dosgk::synthetic
