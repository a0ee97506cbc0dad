#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "netiso/graph.hpp"
#include "netiso/rng.hpp"

namespace netiso {

struct PerronResult {
  std::vector<double> vector;  // unit L2 norm, entrywise >= 0
  double eigenvalue = 0.0;     // Rayleigh quotient estimate of the spectral radius
  std::size_t iterations = 0;
  bool converged = false;
  bool zero_adjacency = false;  // no edges: uniform vector returned
};

namespace detail {

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// y_i = sum over out-neighbors j of x_j, i.e. y = A x.
inline void adjacency_apply(const DirectedGraph& g, const std::vector<double>& x,
                            std::vector<double>& y) {
  for (Unit i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (Unit j : g.out_neighbors(i)) s += x[j];
    y[i] = s;
  }
}

}  // namespace detail

/// Perron eigenvector of the adjacency matrix by power iteration.
///
/// Iterates on A + I, which shares A's eigenvectors and is aperiodic on
/// bipartite graphs (plain A oscillates between the +rho and -rho
/// eigenvectors there). Starts from the uniform vector, so iterates stay
/// nonnegative. Converged when successive normalized iterates differ by less
/// than `tol` in the max norm; otherwise the last iterate is returned with
/// `converged == false`.
inline PerronResult principal_eigenvector(const DirectedGraph& g, double tol = 1e-12,
                                          std::size_t max_iter = 100000) {
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("principal_eigenvector: empty graph");
  PerronResult res;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (g.edge_count() == 0) {
    res.vector = v;
    res.zero_adjacency = true;
    res.converged = true;
    return res;
  }
  std::vector<double> av(n), next(n);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    detail::adjacency_apply(g, v, av);
    for (std::size_t i = 0; i < n; ++i) next[i] = av[i] + v[i];
    double norm = detail::l2_norm(next);
    for (double& x : next) x /= norm;
    double diff = detail::linf_diff(next, v);
    v.swap(next);
    res.iterations = it;
    if (diff < tol) {
      res.converged = true;
      break;
    }
  }
  detail::adjacency_apply(g, v, av);
  res.eigenvalue = std::inner_product(v.begin(), v.end(), av.begin(), 0.0);
  res.vector = std::move(v);
  return res;
}

struct HomophilyResult {
  std::vector<double> h;    // unit L2 norm; first nonzero entry positive
  double eigenvalue = 0.0;  // second-smallest eigenvalue of D^{-1} L
  std::size_t iterations = 0;
  bool converged = false;
  bool disconnected = false;  // eigenvalue 0 has multiplicity > 1
  bool degenerate = false;    // only set when multiplicity is checked
};

struct HomophilyOptions {
  double tol = 1e-10;
  std::size_t max_iter = 500000;
  /// Also extract the third eigenpair and flag |lambda3 - lambda2| < 1e-6.
  bool check_multiplicity = false;
  std::uint64_t start_seed = 0x5eed;
};

namespace detail {

// Deflated power iteration on M = 2I + D^{-1/2} A D^{-1/2} = 3I - L_sym,
// restricted to units with positive degree. Eigenvalues of M are 3 - lambda
// with lambda in [0, 2], so M is positive definite (never annihilates a
// direction, as 2I - L_sym would on a single edge) and the iteration
// converges monotonically to the top eigenvector orthogonal to `deflate`.
inline std::vector<double> deflated_power(const DirectedGraph& g,
                                          const std::vector<double>& inv_sqrt_deg,
                                          const std::vector<std::vector<double>>& deflate,
                                          const HomophilyOptions& opt, double& mu,
                                          std::size_t& iterations, bool& converged) {
  const std::size_t n = g.size();
  Rng rng(opt.start_seed);
  std::vector<double> u(n), next(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = inv_sqrt_deg[i] > 0 ? rng.normal(0.0, 1.0) : 0.0;
  auto project = [&](std::vector<double>& x) {
    for (const auto& q : deflate) {
      double c = std::inner_product(x.begin(), x.end(), q.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) x[i] -= c * q[i];
    }
    double norm = l2_norm(x);
    if (norm > 0)
      for (double& e : x) e /= norm;
  };
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (Unit i = 0; i < n; ++i) {
      if (inv_sqrt_deg[i] == 0) {
        y[i] = 0;
        continue;
      }
      double s = 0.0;
      for (Unit j : g.in_neighbors(i)) s += inv_sqrt_deg[j] * x[j];
      y[i] = 2.0 * x[i] + inv_sqrt_deg[i] * s;
    }
  };
  project(u);
  converged = false;
  iterations = 0;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    apply(u, next);
    project(next);
    // Fix the sign by the largest-magnitude entry so a vector converging up
    // to sign is not mistaken for oscillation.
    double diff = std::min(linf_diff(next, u), [&] {
      double m = 0;
      for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(next[i] + u[i]));
      return m;
    }());
    u.swap(next);
    iterations = it;
    if (diff < opt.tol) {
      converged = true;
      break;
    }
  }
  apply(u, next);
  mu = std::inner_product(u.begin(), u.end(), next.begin(), 0.0);
  return u;
}

}  // namespace detail

/// Eigenvector h of D^{-1} L = I - D^{-1} A for the second-smallest
/// eigenvalue, on a symmetric graph.
///
/// Solved through the similar symmetric matrix L_sym = D^{-1/2} L D^{-1/2}:
/// if L_sym u = lambda u then h = D^{-1/2} u. The trivial eigenvector
/// u0 = D^{1/2} 1 is deflated, so the returned h is D-orthogonal to the
/// constants: sum_i d_i h_i = 0. Zero-degree units get h_i = 0. The result is
/// rescaled to unit L2 norm and its first nonzero entry made positive.
inline HomophilyResult laplacian_homophily_vector(const DirectedGraph& g,
                                                  const HomophilyOptions& opt = {}) {
  if (!g.is_symmetric())
    throw std::invalid_argument("laplacian_homophily_vector requires a symmetric graph");
  const std::size_t n = g.size();
  HomophilyResult res;
  res.h.assign(n, 0.0);
  std::vector<double> inv_sqrt_deg(n, 0.0);
  std::vector<double> u0(n, 0.0);
  std::size_t active = 0;
  for (Unit i = 0; i < n; ++i) {
    if (g.in_degree(i) > 0) {
      inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.in_degree(i)));
      u0[i] = std::sqrt(static_cast<double>(g.in_degree(i)));
      ++active;
    }
  }
  if (active < 2) {
    res.converged = true;
    res.disconnected = active < n;
    return res;
  }
  double u0n = detail::l2_norm(u0);
  for (double& x : u0) x /= u0n;

  std::size_t isolated = n - active;
  // Components among positive-degree units; isolated units are excluded.
  res.disconnected = component_count(g) - isolated > 1;

  double mu = 0.0;
  std::vector<std::vector<double>> deflate{u0};
  std::vector<double> u =
      detail::deflated_power(g, inv_sqrt_deg, deflate, opt, mu, res.iterations, res.converged);
  res.eigenvalue = 3.0 - mu;

  if (opt.check_multiplicity && active >= 3) {
    deflate.push_back(u);
    double mu3 = 0.0;
    std::size_t it3 = 0;
    bool conv3 = false;
    detail::deflated_power(g, inv_sqrt_deg, deflate, opt, mu3, it3, conv3);
    res.degenerate = std::abs(mu3 - mu) < 1e-6;
  }

  for (Unit i = 0; i < n; ++i) res.h[i] = u[i] * inv_sqrt_deg[i];
  double norm = detail::l2_norm(res.h);
  if (norm > 0)
    for (double& x : res.h) x /= norm;
  for (double x : res.h) {
    if (std::abs(x) > 1e-14) {
      if (x < 0)
        for (double& y : res.h) y = -y;
      break;
    }
  }
  return res;
}

}  // namespace netiso
