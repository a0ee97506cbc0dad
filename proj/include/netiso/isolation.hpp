#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/graph.hpp"
#include "netiso/rng.hpp"
#include "netiso/spectral.hpp"

namespace netiso {

/// Per-unit sampling weights for weighted random isolation. Entries below
/// kFloor (including exact zeros) are raised to kFloor so every Beta key is
/// finite; negative or non-finite entries are rejected.
class WeightVector {
 public:
  static constexpr double kFloor = 1e-12;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> w, std::string id = {})
      : w_(std::move(w)), id_(std::move(id)) {
    for (double& x : w_) {
      if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("weights must be finite and nonnegative");
      x = std::max(x, kFloor);
    }
  }

  static WeightVector uniform(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0), "degree^0"); }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }
  const std::string& id() const noexcept { return id_; }

  WeightVector scaled(double c) const {
    std::vector<double> w = w_;
    for (double& x : w) x *= c;
    return WeightVector(std::move(w), id_);
  }

 private:
  std::vector<double> w_;
  std::string id_;
};

/// Units chosen by (weighted) random isolation, in selection order. Closed
/// in-neighborhoods of members are pairwise disjoint and the set is maximal.
struct IsolatedSet {
  std::vector<Unit> members;
  std::uint64_t source_seed = 0;

  std::size_t size() const noexcept { return members.size(); }
  std::vector<Unit> sorted() const {
    std::vector<Unit> s = members;
    std::sort(s.begin(), s.end());
    return s;
  }
};

/// Uniform random isolation: pick a remaining unit uniformly, keep it, drop
/// its removal set, repeat until nothing remains.
inline IsolatedSet random_isolation(const DirectedGraph& g, Rng& rng) {
  const std::size_t n = g.size();
  IsolatedSet s;
  s.source_seed = rng.seed();
  // pool[0..live) holds the remaining units; pos[u] is u's slot or n if gone.
  std::vector<Unit> pool(n);
  std::vector<std::size_t> pos(n);
  std::iota(pool.begin(), pool.end(), Unit{0});
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::size_t live = n;
  auto remove = [&](Unit u) {
    std::size_t k = pos[u];
    if (k == n) return;
    Unit last = pool[live - 1];
    pool[k] = last;
    pos[last] = k;
    pos[u] = n;
    --live;
  };
  while (live > 0) {
    Unit i = pool[rng.below(live)];
    s.members.push_back(i);
    for_each_in_removal_set(g, i, remove);
  }
  return s;
}

/// log of X ~ Beta(w, 1), computed as log(U) / w with U ~ Uniform(0, 1).
/// Larger keys win; the log domain keeps keys distinct when w is large.
inline double beta_log_key(double w, Rng& rng) { return std::log(rng.uniform_open()) / w; }

/// Weighted random isolation. Each unit draws a Beta(w_i, 1) key once; the
/// largest remaining key is selected each round, which picks j with
/// probability w_j / sum of remaining weights. Ties go to the smaller index.
inline IsolatedSet weighted_random_isolation(const DirectedGraph& g, const WeightVector& w,
                                             Rng& rng) {
  const std::size_t n = g.size();
  if (w.size() != n) throw std::invalid_argument("weight vector length differs from unit count");
  IsolatedSet s;
  s.source_seed = rng.seed();
  std::vector<double> key(n);
  for (Unit i = 0; i < n; ++i) key[i] = beta_log_key(w[i], rng);
  std::vector<Unit> order(n);
  std::iota(order.begin(), order.end(), Unit{0});
  std::sort(order.begin(), order.end(), [&](Unit a, Unit b) {
    return key[a] != key[b] ? key[a] > key[b] : a < b;
  });
  std::vector<char> removed(n, 0);
  for (Unit i : order) {
    if (removed[i]) continue;
    s.members.push_back(i);
    for_each_in_removal_set(g, i, [&](Unit j) { removed[j] = 1; });
  }
  return s;
}

struct BetaKeyCheck {
  double empirical = 0.0;  // fraction of draws with key_i > key_j
  double expected = 0.0;   // w_i / (w_i + w_j)
  double tolerance = 0.0;  // 4 binomial standard errors
  std::vector<double> max_keys;  // max(X_i, X_j) per draw, on the natural scale

  bool within_tolerance() const { return std::abs(empirical - expected) <= tolerance; }
};

/// Empirical check of the two-key law: P(X_i > X_j) = w_i / (w_i + w_j)
/// and max(X_i, X_j) ~ Beta(w_i + w_j, 1).
inline BetaKeyCheck beta_key_law_check(double wi, double wj, std::size_t n_samples, Rng& rng) {
  if (!(wi > 0 && wj > 0)) throw std::invalid_argument("beta_key_law_check: weights must be positive");
  BetaKeyCheck out;
  out.max_keys.reserve(n_samples);
  std::size_t wins = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    double a = beta_log_key(wi, rng);
    double b = beta_log_key(wj, rng);
    if (a > b) ++wins;
    out.max_keys.push_back(std::exp(std::max(a, b)));
  }
  out.expected = wi / (wi + wj);
  out.empirical = static_cast<double>(wins) / static_cast<double>(n_samples);
  out.tolerance = 4.0 * std::sqrt(out.expected * (1.0 - out.expected) / static_cast<double>(n_samples));
  return out;
}

// ---------------------------------------------------------------------------
// Candidate weight families

enum class WeightFamily { Degree, Spectral };

struct CandidateId {
  WeightFamily family = WeightFamily::Degree;
  int exponent = 0;

  std::string str() const {
    return std::string(family == WeightFamily::Degree ? "degree^" : "spectral^") +
           std::to_string(exponent);
  }
};

/// Parses `degree^<l>` or `spectral^<l>`.
inline CandidateId parse_candidate_id(const std::string& s) {
  auto caret = s.find('^');
  if (caret == std::string::npos) throw std::invalid_argument("bad candidate id '" + s + "'");
  CandidateId id;
  std::string fam = s.substr(0, caret);
  if (fam == "degree")
    id.family = WeightFamily::Degree;
  else if (fam == "spectral")
    id.family = WeightFamily::Spectral;
  else
    throw std::invalid_argument("unknown weight family '" + fam + "'");
  std::size_t used = 0;
  std::string exp = s.substr(caret + 1);
  try {
    id.exponent = std::stoi(exp, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (exp.empty() || used != exp.size()) throw std::invalid_argument("bad exponent in '" + s + "'");
  return id;
}

/// The default candidate set: degree^l and spectral^l for l = -1..4.
inline std::vector<std::string> default_candidate_ids() {
  std::vector<std::string> ids;
  for (int l = -1; l <= 4; ++l) ids.push_back(CandidateId{WeightFamily::Degree, l}.str());
  for (int l = -1; l <= 4; ++l) ids.push_back(CandidateId{WeightFamily::Spectral, l}.str());
  return ids;
}

/// Builds candidate weights for one graph, computing the spectral vector
/// (Perron vector of the squared graph, rescaled to max entry 1) at most once.
///
///   degree^l   : w_i = max(d_i, 1)^l
///   spectral^l : w_i = max(v_i, 1e-12)^l
class CandidateBuilder {
 public:
  explicit CandidateBuilder(const DirectedGraph& g) : g_(&g) {}

  WeightVector build(const CandidateId& id) {
    const std::size_t n = g_->size();
    std::vector<double> w(n);
    if (id.family == WeightFamily::Degree) {
      for (Unit i = 0; i < n; ++i)
        w[i] = std::pow(static_cast<double>(std::max<std::size_t>(g_->in_degree(i), 1)), id.exponent);
    } else {
      const auto& v = spectral();
      for (Unit i = 0; i < n; ++i) w[i] = std::pow(std::max(v[i], 1e-12), id.exponent);
    }
    return WeightVector(std::move(w), id.str());
  }

  WeightVector build(const std::string& id) { return build(parse_candidate_id(id)); }

  const std::vector<double>& spectral() {
    if (!spectral_) {
      PerronResult r = principal_eigenvector(squared_graph(*g_));
      double mx = *std::max_element(r.vector.begin(), r.vector.end());
      if (mx > 0)
        for (double& x : r.vector) x /= mx;
      spectral_ = std::move(r.vector);
    }
    return *spectral_;
  }

 private:
  const DirectedGraph* g_;
  std::optional<std::vector<double>> spectral_;
};

inline WeightVector candidate_weights(const DirectedGraph& g, WeightFamily family, int exponent) {
  return CandidateBuilder(g).build(CandidateId{family, exponent});
}

/// `unit,weight` CSV with a header row.
inline void write_weights_csv(std::ostream& out, const WeightVector& w) {
  out << "unit,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, w[i]);
    out << buf;
  }
}

inline WeightVector read_weights_csv(std::istream& in, std::size_t n) {
  std::vector<double> w(n, 0.0);
  std::vector<char> seen(n, 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("unit", 0) == 0) continue;
    auto comma = line.find(',');
    Unit u = 0;
    if (comma == std::string::npos || !detail::parse_unit(line.substr(0, comma), u))
      throw ParseError(lineno, "expected unit,weight");
    if (u >= n) throw ParseError(lineno, "unit out of range");
    try {
      w[u] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad weight value");
    }
    seen[u] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) throw std::invalid_argument("weight missing for unit " + std::to_string(i));
  return WeightVector(std::move(w), "file");
}

}  // namespace netiso
