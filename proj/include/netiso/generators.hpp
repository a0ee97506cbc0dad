#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/graph.hpp"
#include "netiso/rng.hpp"

namespace netiso {

enum class NetworkModel { BA, RG, SW, ER, SBM };

inline const char* to_string(NetworkModel m) {
  switch (m) {
    case NetworkModel::BA: return "BA";
    case NetworkModel::RG: return "RG";
    case NetworkModel::SW: return "SW";
    case NetworkModel::ER: return "ER";
    case NetworkModel::SBM: return "SBM";
  }
  return "?";
}

inline NetworkModel parse_network_model(const std::string& s) {
  if (s == "BA") return NetworkModel::BA;
  if (s == "RG") return NetworkModel::RG;
  if (s == "SW") return NetworkModel::SW;
  if (s == "ER") return NetworkModel::ER;
  if (s == "SBM") return NetworkModel::SBM;
  throw std::invalid_argument("unknown network model '" + s + "'");
}

/// Model parameters. Unset fields take n-dependent defaults that target the
/// mean degrees of the reference 1200-unit networks (BA 6.0, RG 6.7, SW 10,
/// ER 6.9, SBM 5.3).
struct GeneratorParams {
  std::optional<std::size_t> ba_edges_per_arrival;       // m, default 3
  std::optional<double> rg_radius;                       // default: solves mean degree 6.747
  std::optional<std::size_t> sw_ring_degree;             // k, default 10
  std::optional<double> sw_rewire_prob;                  // beta, default 0.3
  std::optional<double> er_edge_prob;                    // default 6.902 / (n - 1)
  std::vector<std::size_t> sbm_block_sizes;              // default 4 near-equal blocks
  std::vector<std::vector<double>> sbm_block_probs;      // default within 4.95, between 0.32 expected degree
};

/// Expected degree of a random geometric graph in the unit square with
/// boundary effects: (n - 1)(pi r^2 - 8/3 r^3 + r^4 / 2), valid for r <= 1.
inline double rg_expected_degree(std::size_t n, double r) {
  return static_cast<double>(n - 1) *
         (std::numbers::pi * r * r - 8.0 / 3.0 * r * r * r + 0.5 * r * r * r * r);
}

inline double rg_radius_for_mean_degree(std::size_t n, double target) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (rg_expected_degree(n, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline std::vector<Edge> barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("BA: edges per arrival must be >= 1");
  const std::size_t n0 = m + 1;
  if (n < n0) throw std::invalid_argument("BA: need n >= m + 1");
  std::vector<Edge> edges;
  std::vector<Unit> endpoints;  // each unit appears once per incident edge
  for (Unit i = 0; i < n0; ++i)
    for (Unit j = i + 1; j < n0; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<Unit> chosen;
  for (Unit v = n0; v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      Unit t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (Unit t : chosen) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

inline std::vector<Edge> random_geometric(std::size_t n, double r, Rng& rng) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("RG: radius must lie in (0, 1]");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform_open();
    y[i] = rng.uniform_open();
  }
  std::vector<Edge> edges;
  const double r2 = r * r;
  for (Unit i = 0; i < n; ++i)
    for (Unit j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
    }
  return edges;
}

// Watts-Strogatz: ring lattice with k/2 neighbors per side, then the far end
// of each lattice edge is rewired with probability beta to a uniform unit
// that is neither the source nor already adjacent. Edge count stays nk/2.
inline std::vector<Edge> watts_strogatz(std::size_t n, std::size_t k, double beta, Rng& rng) {
  if (k % 2 != 0 || k == 0) throw std::invalid_argument("SW: ring degree k must be even and positive");
  if (k >= n) throw std::invalid_argument("SW: ring degree k must be < n");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("SW: rewire prob must lie in [0, 1]");
  std::vector<std::set<Unit>> adj(n);
  auto link = [&](Unit a, Unit b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  auto unlink = [&](Unit a, Unit b) {
    adj[a].erase(b);
    adj[b].erase(a);
  };
  for (Unit u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k / 2; ++j) link(u, (u + j) % n);
  for (std::size_t j = 1; j <= k / 2; ++j)
    for (Unit u = 0; u < n; ++u) {
      Unit v = (u + j) % n;
      if (!adj[u].count(v) || !rng.bernoulli(beta)) continue;
      if (adj[u].size() >= n - 1) continue;
      Unit w;
      do {
        w = rng.below(n);
      } while (w == u || adj[u].count(w));
      unlink(u, v);
      link(u, w);
    }
  std::vector<Edge> edges;
  for (Unit a = 0; a < n; ++a)
    for (Unit b : adj[a])
      if (a < b) edges.emplace_back(a, b);
  return edges;
}

inline std::vector<Edge> erdos_renyi(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ER: edge prob must lie in [0, 1]");
  std::vector<Edge> edges;
  if (p == 0.0) return edges;
  for (Unit i = 0; i < n; ++i)
    for (Unit j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return edges;
}

inline std::vector<Edge> stochastic_block(const std::vector<std::size_t>& sizes,
                                          const std::vector<std::vector<double>>& probs,
                                          Rng& rng) {
  const std::size_t b = sizes.size();
  if (b == 0 || probs.size() != b) throw std::invalid_argument("SBM: block sizes and probability matrix disagree");
  for (std::size_t r = 0; r < b; ++r) {
    if (probs[r].size() != b) throw std::invalid_argument("SBM: probability matrix must be square");
    for (std::size_t c = 0; c < b; ++c) {
      double p = probs[r][c];
      if (!(p >= 0.0 && p <= 1.0) || probs[c][r] != p)
        throw std::invalid_argument("SBM: probabilities must be symmetric and lie in [0, 1]");
    }
  }
  std::vector<std::size_t> block;
  for (std::size_t r = 0; r < b; ++r) block.insert(block.end(), sizes[r], r);
  const std::size_t n = block.size();
  std::vector<Edge> edges;
  for (Unit i = 0; i < n; ++i)
    for (Unit j = i + 1; j < n; ++j)
      if (rng.bernoulli(probs[block[i]][block[j]])) edges.emplace_back(i, j);
  return edges;
}

}  // namespace detail

/// Default SBM layout for n units: 4 near-equal blocks with expected
/// within-block degree 4.95 and between-block degree 0.32.
inline void default_sbm(std::size_t n, std::vector<std::size_t>& sizes,
                        std::vector<std::vector<double>>& probs) {
  const std::size_t b = n >= 8 ? 4 : 1;
  sizes.assign(b, n / b);
  for (std::size_t r = 0; r < n % b; ++r) ++sizes[r];
  double block = static_cast<double>(n) / static_cast<double>(b);
  double p_in = std::min(1.0, 4.95 / std::max(1.0, block - 1.0));
  double p_out = b > 1 ? std::min(1.0, 0.32 / (static_cast<double>(n) - block)) : 0.0;
  probs.assign(b, std::vector<double>(b, p_out));
  for (std::size_t r = 0; r < b; ++r) probs[r][r] = p_in;
}

/// Undirected random graph stored symmetrically; bit-reproducible given
/// (model, n, params, seed).
inline DirectedGraph generate(NetworkModel model, std::size_t n, const GeneratorParams& params,
                              std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate: n must be positive");
  Rng rng = Rng::substream(seed, {hash_tag(to_string(model)), n});
  std::vector<Edge> edges;
  switch (model) {
    case NetworkModel::BA:
      edges = detail::barabasi_albert(n, params.ba_edges_per_arrival.value_or(3), rng);
      break;
    case NetworkModel::RG:
      edges = detail::random_geometric(
          n, params.rg_radius.value_or(rg_radius_for_mean_degree(n, 6.747)), rng);
      break;
    case NetworkModel::SW:
      edges = detail::watts_strogatz(n, params.sw_ring_degree.value_or(10),
                                     params.sw_rewire_prob.value_or(0.3), rng);
      break;
    case NetworkModel::ER:
      edges = detail::erdos_renyi(
          n, params.er_edge_prob.value_or(n > 1 ? std::min(1.0, 6.902 / double(n - 1)) : 0.0), rng);
      break;
    case NetworkModel::SBM: {
      auto sizes = params.sbm_block_sizes;
      auto probs = params.sbm_block_probs;
      if (sizes.empty()) default_sbm(n, sizes, probs);
      std::size_t total = 0;
      for (auto s : sizes) total += s;
      if (total != n) throw std::invalid_argument("SBM: block sizes must sum to n");
      edges = detail::stochastic_block(sizes, probs, rng);
      break;
    }
  }
  return DirectedGraph::from_edges(n, edges, /*directed=*/false);
}

}  // namespace netiso
