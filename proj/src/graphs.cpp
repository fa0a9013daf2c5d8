#include "postlasso/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "postlasso/linalg.hpp"
#include "postlasso/rng.hpp"

namespace postlasso {

long long target_edge_count(int p, double density) {
  const double max_pairs = double(p) * double(p - 1) / 2.0;
  return static_cast<long long>(std::floor(density * max_pairs + 1e-9));
}

namespace {

EdgeList erdos_renyi(int p, double density, Rng& rng, int offset = 0) {
  EdgeList edges;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (rng.next_uniform() < density) {
        edges.emplace_back(i + offset, j + offset);
      }
    }
  }
  return edges;
}

// Static power-law model: endpoints drawn with weight i^(-1/(gamma-1)),
// repeated until the exact target edge count is reached. Expected degrees
// follow the weights, giving a degree distribution with exponent gamma.
EdgeList scale_free(const GraphSpec& spec, Rng& rng) {
  const int p = spec.p;
  const long long target = target_edge_count(p, spec.edge_density);
  const long long max_pairs = static_cast<long long>(p) * (p - 1) / 2;
  if (target < 0 || target > max_pairs) {
    fail(ErrorKind::InfeasibleDensity,
         "cannot place " + std::to_string(target) + " edges on " +
             std::to_string(p) + " nodes");
  }
  std::vector<double> cumulative(static_cast<size_t>(p));
  double total = 0.0;
  const double exponent = -1.0 / (spec.power_exponent - 1.0);
  for (int i = 0; i < p; ++i) {
    total += std::pow(double(i + 1), exponent);
    cumulative[static_cast<size_t>(i)] = total;
  }
  auto draw_node = [&]() {
    const double u = rng.next_uniform() * total;
    return static_cast<int>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
  };

  std::set<std::pair<int, int>> chosen;
  long long attempts = 0;
  const long long attempt_cap = 400 * target + 1000000;
  while (static_cast<long long>(chosen.size()) < target &&
         attempts < attempt_cap) {
    ++attempts;
    int u = draw_node();
    int v = draw_node();
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    chosen.insert({u, v});
  }
  // Rejection stall (only possible at extreme densities): fill the highest
  // weight unused pairs deterministically.
  if (static_cast<long long>(chosen.size()) < target) {
    for (int i = 0; i < p && static_cast<long long>(chosen.size()) < target;
         ++i) {
      for (int j = i + 1;
           j < p && static_cast<long long>(chosen.size()) < target; ++j) {
        chosen.insert({i, j});
      }
    }
  }
  return EdgeList(chosen.begin(), chosen.end());
}

EdgeList stochastic_block(const GraphSpec& spec, Rng& rng) {
  const int b1 = spec.block1;
  const int b2 = spec.p - b1;
  if (b1 <= 0 || b2 <= 0) {
    fail(ErrorKind::InfeasibleDensity, "block sizes must be positive");
  }
  EdgeList edges = erdos_renyi(b1, spec.intra_density, rng, 0);
  EdgeList block2 = erdos_renyi(b2, spec.intra_density, rng, b1);
  edges.insert(edges.end(), block2.begin(), block2.end());
  for (int i = 0; i < b1; ++i) {
    for (int j = b1; j < spec.p; ++j) {
      if (rng.next_uniform() < spec.inter_density) edges.emplace_back(i, j);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Relabel so that position k holds the (rank_step*(k+1))-th least-connected
// node. Remaining nodes fill the later positions in original index order.
EdgeList relabel_by_degree(const EdgeList& edges, const GraphSpec& spec) {
  const int p = spec.p;
  std::vector<int> degree(static_cast<size_t>(p), 0);
  for (const auto& [u, v] : edges) {
    ++degree[static_cast<size_t>(u)];
    ++degree[static_cast<size_t>(v)];
  }
  std::vector<int> by_degree(static_cast<size_t>(p));
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
    return degree[static_cast<size_t>(a)] < degree[static_cast<size_t>(b)];
  });

  std::vector<int> new_label(static_cast<size_t>(p), -1);
  int next = 0;
  for (int k = 0; k < spec.signal_count; ++k) {
    const int rank = spec.rank_step * (k + 1) - 1;  // 1-based rank to 0-based
    if (rank >= p) {
      fail(ErrorKind::InfeasibleDensity, "rank_step * signal_count exceeds p");
    }
    new_label[static_cast<size_t>(by_degree[static_cast<size_t>(rank)])] =
        next++;
  }
  for (int j = 0; j < p; ++j) {
    if (new_label[static_cast<size_t>(j)] < 0) {
      new_label[static_cast<size_t>(j)] = next++;
    }
  }
  EdgeList out;
  out.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    int a = new_label[static_cast<size_t>(u)];
    int b = new_label[static_cast<size_t>(v)];
    if (a > b) std::swap(a, b);
    out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EdgeList generate_graph(const GraphSpec& spec, uint64_t seed) {
  if (spec.p < 2) fail(ErrorKind::InfeasibleDensity, "graph needs p >= 2");
  Rng rng = Rng::substream(seed, stream::kGraph);
  switch (spec.kind) {
    case GraphKind::ErdosRenyi:
      return erdos_renyi(spec.p, spec.edge_density, rng);
    case GraphKind::StochasticBlock:
      return stochastic_block(spec, rng);
    case GraphKind::ScaleFree: {
      EdgeList edges = scale_free(spec, rng);
      if (spec.signal_count > 0) edges = relabel_by_degree(edges, spec);
      return edges;
    }
  }
  fail(ErrorKind::ConfigInvalid, "unknown graph kind");
}

CovarianceModel covariance_from_graph(const EdgeList& edges, int p,
                                      double rho) {
  CovarianceModel model;
  model.rho = rho;
  model.a = Matrix::Identity(p, p);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= p || v >= p || u == v) {
      fail(ErrorKind::OutOfDomain, "edge endpoint out of range");
    }
    model.a(u, v) = rho;
    model.a(v, u) = rho;
  }
  const auto llt = spd_factor(model.a, ErrorKind::NotPositiveDefinite,
                              "weighted adjacency is not PD");
  Matrix sigma = llt.solve(Matrix::Identity(p, p));
  Vector d = sigma.diagonal().cwiseSqrt();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) sigma(i, j) /= d[i] * d[j];
    sigma(i, i) = 1.0;
  }
  model.sigma = std::move(sigma);
  return model;
}

CovarianceModel covariance_from_graph_inflated(const EdgeList& edges, int p,
                                               double rho, double margin) {
  CovarianceModel model;
  model.rho = rho;
  Matrix adjacency = Matrix::Zero(p, p);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= p || v >= p || u == v) {
      fail(ErrorKind::OutOfDomain, "edge endpoint out of range");
    }
    adjacency(u, v) = 1.0;
    adjacency(v, u) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(adjacency, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  const double diagonal =
      rho * std::max(-lambda_min, 0.0) + std::max(margin, 1e-8);
  model.a = rho * adjacency + diagonal * Matrix::Identity(p, p);
  const auto llt = spd_factor(model.a, ErrorKind::NotPositiveDefinite,
                              "inflated adjacency is not PD");
  Matrix sigma = llt.solve(Matrix::Identity(p, p));
  Vector d = sigma.diagonal().cwiseSqrt();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) sigma(i, j) /= d[i] * d[j];
    sigma(i, i) = 1.0;
  }
  model.sigma = std::move(sigma);
  return model;
}

CovarianceModel sample_wishart_correlation(int p, uint64_t seed) {
  if (p < 2) fail(ErrorKind::OutOfDomain, "Wishart draw needs p >= 2");
  Rng rng = Rng::substream(seed, stream::kWishart);
  // Bartlett: W = T T^T with T lower triangular, T_ii^2 ~ chi^2_{p-i},
  // T_ij ~ N(0,1) below the diagonal. df = p and identity scale.
  Matrix t = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    double chi2 = 0.0;
    for (int k = 0; k < p - i; ++k) {
      const double z = rng.next_normal();
      chi2 += z * z;
    }
    t(i, i) = std::sqrt(chi2);
    for (int j = 0; j < i; ++j) t(i, j) = rng.next_normal();
  }
  Matrix w = t * t.transpose();
  CovarianceModel model;
  model.rho = 0.0;
  model.a = w;  // pre-standardization draw, kept for diagnostics
  Vector d = w.diagonal().cwiseSqrt();
  for (int i = 0; i < p; ++i) {
    if (!(d[i] > 0.0)) {
      fail(ErrorKind::NotPositiveDefinite, "degenerate Wishart diagonal");
    }
  }
  Matrix sigma = w;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) sigma(i, j) /= d[i] * d[j];
    sigma(i, i) = 1.0;
  }
  spd_factor(sigma, ErrorKind::NotPositiveDefinite,
             "Wishart correlation is not PD");
  model.sigma = std::move(sigma);
  return model;
}

}  // namespace postlasso
