#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/assignment.hpp"
#include "netiso/graph.hpp"
#include "netiso/isolation.hpp"
#include "netiso/parallel.hpp"
#include "netiso/rng.hpp"

namespace netiso {

/// `WithCR` is the full surrogate: arm PMF mismatch plus inverse arm sizes
/// after a complete-randomization split. `NoCR` skips the split and scores
/// the isolated set itself: ||P_S - P_G||^2 + 1/|S|.
enum class SurrogateMode { WithCR, NoCR };

struct SurrogateOptions {
  SurrogateMode mode = SurrogateMode::WithCR;
  /// Multiplier on the PMF term; 1 drops d_max from the surrogate.
  /// Set to (d_max + 2)^2 to reproduce the d_max-weighted variant.
  double l2_weight = 1.0;
  /// Key draws by draw index only, so every candidate sees the same uniforms.
  bool common_random_numbers = false;
  std::size_t threads = 1;
};

struct SurrogateSample {
  double l2_term = 0.0;    // PMF mismatch (both arms, or S alone under NoCR)
  double size_term = 0.0;  // 1/|S1| + 1/|S0|, or 1/|S| under NoCR
  std::size_t s_size = 0;
  bool degenerate = false;  // |S| < 2 under WithCR

  double value(double l2_weight = 1.0) const {
    return degenerate ? std::numeric_limits<double>::infinity() : l2_weight * l2_term + size_term;
  }
};

/// One WRI draw (plus one CR split under WithCR) scored by the surrogate.
inline SurrogateSample surrogate_draw(const DirectedGraph& g, const WeightVector& w,
                                      const DegreePMF& pop_pmf, Rng& rng,
                                      SurrogateMode mode = SurrogateMode::WithCR) {
  IsolatedSet s = weighted_random_isolation(g, w, rng);
  const std::size_t dref = pop_pmf.prob.size() - 1;
  SurrogateSample out;
  out.s_size = s.size();
  if (mode == SurrogateMode::NoCR) {
    out.l2_term = l2_pmf_distance_sq(degree_pmf(g, s.members, dref), pop_pmf);
    out.size_term = 1.0 / static_cast<double>(s.size());
    return out;
  }
  if (s.size() < 2) {
    out.degenerate = true;
    return out;
  }
  std::vector<Unit> s0;
  std::vector<Unit> s1 = complete_randomization_split(s.members, s.size() / 2, rng, &s0);
  out.l2_term = l2_pmf_distance_sq(degree_pmf(g, s1, dref), pop_pmf) +
                l2_pmf_distance_sq(degree_pmf(g, s0, dref), pop_pmf);
  out.size_term = 1.0 / static_cast<double>(s1.size()) + 1.0 / static_cast<double>(s0.size());
  return out;
}

struct SurrogateEstimate {
  double mean = 0.0;  // +inf when any draw was degenerate
  double se = 0.0;
  double mean_l2 = 0.0;
  double mean_size = 0.0;
  double mean_s = 0.0;
  std::size_t n_draws = 0;
  std::size_t degenerate_draws = 0;

  bool disqualified() const { return degenerate_draws > 0; }
};

/// Monte Carlo mean of `n_pre` surrogate draws. Draw j uses the substream
/// (seed, candidate_index, j), or (seed, j) with common random numbers.
inline SurrogateEstimate estimate_surrogate(const DirectedGraph& g, const WeightVector& w,
                                            std::size_t n_pre, std::uint64_t seed,
                                            std::size_t candidate_index = 0,
                                            const SurrogateOptions& opt = {}) {
  if (n_pre == 0) throw std::invalid_argument("estimate_surrogate: n_pre must be >= 1");
  const DegreePMF pop = population_degree_pmf(g);
  std::vector<SurrogateSample> draws(n_pre);
  parallel_for(n_pre, opt.threads, [&](std::size_t j) {
    Rng rng = opt.common_random_numbers ? Rng::substream(seed, {j})
                                        : Rng::substream(seed, {candidate_index, j});
    draws[j] = surrogate_draw(g, w, pop, rng, opt.mode);
  });
  SurrogateEstimate est;
  est.n_draws = n_pre;
  double sum = 0, sumsq = 0;
  for (const auto& d : draws) {
    est.mean_s += static_cast<double>(d.s_size);
    if (d.degenerate) {
      ++est.degenerate_draws;
      continue;
    }
    double v = d.value(opt.l2_weight);
    sum += v;
    sumsq += v * v;
    est.mean_l2 += d.l2_term;
    est.mean_size += d.size_term;
  }
  const double N = static_cast<double>(n_pre);
  est.mean_s /= N;
  if (est.degenerate_draws > 0) {
    est.mean = std::numeric_limits<double>::infinity();
    est.se = 0.0;
    return est;
  }
  est.mean = sum / N;
  est.mean_l2 /= N;
  est.mean_size /= N;
  double var = n_pre > 1 ? std::max(0.0, (sumsq - N * est.mean * est.mean) / (N - 1)) : 0.0;
  est.se = std::sqrt(var / N);
  return est;
}

struct CandidateResult {
  std::string id;
  SurrogateEstimate estimate;
};

struct SelectionReport {
  std::vector<CandidateResult> candidates;
  std::size_t chosen = 0;
  WeightVector weights;
};

/// Evaluates every candidate and returns the argmin of the mean surrogate,
/// breaking ties by the smaller candidate index. Candidates with any
/// degenerate draw are disqualified; if all are, throws.
inline SelectionReport select_weight(const DirectedGraph& g,
                                     const std::vector<WeightVector>& candidates,
                                     std::size_t n_pre, std::uint64_t seed,
                                     const SurrogateOptions& opt = {}) {
  if (candidates.empty()) throw std::invalid_argument("select_weight: no candidates");
  SelectionReport rep;
  bool any = false;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    CandidateResult r;
    r.id = candidates[c].id().empty() ? "candidate" + std::to_string(c) : candidates[c].id();
    r.estimate = estimate_surrogate(g, candidates[c], n_pre, seed, c, opt);
    if (!r.estimate.disqualified() && (!any || r.estimate.mean < best)) {
      best = r.estimate.mean;
      rep.chosen = c;
      any = true;
    }
    rep.candidates.push_back(std::move(r));
  }
  if (!any) throw std::runtime_error("select_weight: every candidate produced a degenerate isolated set");
  rep.weights = candidates[rep.chosen];
  return rep;
}

inline SelectionReport select_weight(const DirectedGraph& g, const std::vector<std::string>& ids,
                                     std::size_t n_pre, std::uint64_t seed,
                                     const SurrogateOptions& opt = {}) {
  CandidateBuilder builder(g);
  std::vector<WeightVector> ws;
  for (const auto& id : ids) ws.push_back(builder.build(id));
  return select_weight(g, ws, n_pre, seed, opt);
}

/// `candidate,m_l,se,n_draws,chosen` CSV. Disqualified candidates print `inf`.
inline void write_selection_csv(std::ostream& out, const SelectionReport& rep) {
  out << "candidate,m_l,se,n_draws,chosen\n";
  char buf[256];
  for (std::size_t c = 0; c < rep.candidates.size(); ++c) {
    const auto& r = rep.candidates[c];
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%zu,%d\n", r.id.c_str(), r.estimate.mean,
                  r.estimate.se, r.estimate.n_draws, c == rep.chosen ? 1 : 0);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// Exact enumeration for small graphs

inline constexpr std::size_t kMaxEnumerationUnits = 24;

struct SetProbability {
  std::vector<Unit> members;  // sorted
  double probability = 0.0;
};

/// Exact distribution of the WRI isolated set (as an unordered set) by
/// dynamic programming over (remaining units, selected units) states with
/// per-round roulette probabilities w_j / sum of remaining weights.
inline std::vector<SetProbability> isolated_set_distribution(const DirectedGraph& g,
                                                             const WeightVector& w) {
  const std::size_t n = g.size();
  if (n > kMaxEnumerationUnits) throw std::invalid_argument("graph too large for exact enumeration");
  if (w.size() != n) throw std::invalid_argument("weight vector length differs from unit count");
  using Mask = std::uint32_t;
  std::vector<Mask> rm(n, 0);
  for (Unit i = 0; i < n; ++i)
    for_each_in_removal_set(g, i, [&](Unit j) { rm[i] |= Mask{1} << j; });
  std::map<Mask, std::map<Mask, double>> frontier;
  const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
  frontier[full][0] = 1.0;
  std::map<Mask, double> finals;
  while (!frontier.empty()) {
    auto node = std::prev(frontier.end());
    Mask remaining = node->first;
    std::map<Mask, double> by_set = std::move(node->second);
    frontier.erase(node);
    if (remaining == 0) {
      for (auto& [s, p] : by_set) finals[s] += p;
      continue;
    }
    double total = 0.0;
    for (Unit j = 0; j < n; ++j)
      if (remaining >> j & 1) total += w[j];
    for (Unit j = 0; j < n; ++j) {
      if (!(remaining >> j & 1)) continue;
      double pj = w[j] / total;
      Mask next = remaining & ~rm[j];
      auto& dst = frontier[next];
      for (auto& [s, p] : by_set) dst[s | Mask{1} << j] += p * pj;
    }
  }
  std::vector<SetProbability> out;
  for (auto& [s, p] : finals) {
    SetProbability sp;
    for (Unit j = 0; j < n; ++j)
      if (s >> j & 1) sp.members.push_back(j);
    sp.probability = p;
    out.push_back(std::move(sp));
  }
  return out;
}

/// Exact surrogate expectation by enumeration: over isolated sets, and under
/// WithCR also over every floor(|S|/2)-subset split. Returns +inf under WithCR
/// if any isolated set with positive probability has fewer than 2 units.
inline double surrogate_exact(const DirectedGraph& g, const WeightVector& w,
                              SurrogateMode mode = SurrogateMode::WithCR, double l2_weight = 1.0) {
  const DegreePMF pop = population_degree_pmf(g);
  const std::size_t dref = pop.prob.size() - 1;
  double total = 0.0;
  for (const auto& sp : isolated_set_distribution(g, w)) {
    const auto& s = sp.members;
    if (mode == SurrogateMode::NoCR) {
      total += sp.probability * (l2_weight * l2_pmf_distance_sq(degree_pmf(g, s, dref), pop) +
                                 1.0 / static_cast<double>(s.size()));
      continue;
    }
    if (s.size() < 2) return std::numeric_limits<double>::infinity();
    const std::size_t k = s.size(), k1 = k / 2;
    double acc = 0.0;
    std::size_t splits = 0;
    for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << k); ++pick) {
      if (static_cast<std::size_t>(std::popcount(pick)) != k1) continue;
      std::vector<Unit> s1, s0;
      for (std::size_t t = 0; t < k; ++t) (pick >> t & 1 ? s1 : s0).push_back(s[t]);
      acc += l2_weight * (l2_pmf_distance_sq(degree_pmf(g, s1, dref), pop) +
                          l2_pmf_distance_sq(degree_pmf(g, s0, dref), pop)) +
             1.0 / static_cast<double>(s1.size()) + 1.0 / static_cast<double>(s0.size());
      ++splits;
    }
    total += sp.probability * acc / static_cast<double>(splits);
  }
  return total;
}

}  // namespace netiso
