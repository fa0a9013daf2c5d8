#pragma once

#include <cstdint>

#include "postlasso/types.hpp"

namespace postlasso {

using EdgeList = std::vector<std::pair<int, int>>;  // i < j

enum class GraphKind { ScaleFree, ErdosRenyi, StochasticBlock };

struct GraphSpec {
  GraphKind kind = GraphKind::ScaleFree;
  int p = 100;

  // scale-free
  double power_exponent = 5.0;
  double edge_density = 0.05;
  // After generation the nodes are relabeled so that position k
  // (k = 0..signal_count-1) holds the (rank_step*(k+1))-th least-connected
  // node; remaining nodes keep their original relative order. Degree ties
  // break by original index. signal_count = 0 disables relabeling.
  int signal_count = 0;
  int rank_step = 10;

  // Erdos-Renyi (edge_density reused)

  // stochastic block: two ER blocks plus independent inter-block edges;
  // the small block comes first.
  int block1 = 5;
  double intra_density = 0.3;
  double inter_density = 0.05;
};

struct CovarianceModel {
  Matrix a;      // weighted adjacency: 1 on diagonal, rho on edges
  Matrix sigma;  // A^{-1} rescaled to unit diagonal
  double rho = 0.0;
};

EdgeList generate_graph(const GraphSpec& spec, uint64_t seed);

// A = I + rho * adjacency; Sigma = standardized A^{-1}. Throws
// NotPositiveDefinite when A has a nonpositive eigenvalue (the caller
// regenerates the graph with a new seed).
CovarianceModel covariance_from_graph(const EdgeList& edges, int p,
                                      double rho);

// Always-PD variant for graphs whose unit-diagonal adjacency cannot be
// positive definite (dense graphs, large rho): the precision matrix is
// rho * adjacency + (rho |lambda_min(adjacency)| + margin) I, inverted and
// rescaled to unit diagonal. Preserves the sparsity pattern and pushes the
// partial correlations as close to the requested strength as the spectrum
// allows.
CovarianceModel covariance_from_graph_inflated(const EdgeList& edges, int p,
                                               double rho,
                                               double margin = 0.05);

// Wishart(p, I_p) draw via the Bartlett decomposition, rescaled to unit
// diagonal.
CovarianceModel sample_wishart_correlation(int p, uint64_t seed);

// floor(density * p (p-1) / 2): the edge-count calibration used for the
// scale-free generator.
long long target_edge_count(int p, double density);

}  // namespace postlasso
