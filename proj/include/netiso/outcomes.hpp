#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/assignment.hpp"
#include "netiso/graph.hpp"
#include "netiso/rng.hpp"
#include "netiso/spectral.hpp"

namespace netiso {

enum class OutcomeKind { UganderMult, LinearCascade, Contagion };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::UganderMult: return "ugander";
    case OutcomeKind::LinearCascade: return "linear";
    case OutcomeKind::Contagion: return "contagion";
  }
  return "?";
}

inline OutcomeKind parse_outcome_kind(const std::string& s) {
  if (s == "ugander" || s == "ugander_mult") return OutcomeKind::UganderMult;
  if (s == "linear" || s == "linear_cascade") return OutcomeKind::LinearCascade;
  if (s == "contagion") return OutcomeKind::Contagion;
  throw std::invalid_argument("unknown outcome model '" + s + "'");
}

struct UganderParams {
  double a = 1.0;
  double b = 0.5;
  double sigma = 0.1;
  double delta_mean = 0.5;
  double delta_var = 0.01;
  double gamma_mean = 1.0;
  double gamma_var = 0.01;
};

struct LinearParams {
  double alpha = -1.0;
  double beta = 0.8;
  double gamma = 1.0;
  std::size_t truncation = 10;
};

struct ContagionParams {
  double alpha = -1.0;
  double beta = 1.5;
  double delta = 1.0;
  double gamma = 1.0;
  double y0_prob = 0.5;
  std::size_t max_steps = 200;
};

struct OutcomeParams {
  UganderParams ugander;
  LinearParams linear;
  ContagionParams contagion;
};

/// Per-unit draws fixed at build time. Every column is always populated so
/// the table has one shape for all model kinds.
struct FrozenState {
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<double> gamma;
  std::vector<std::uint8_t> y0;
};

class ContagionError : public std::runtime_error {
 public:
  ContagionError(std::vector<std::uint8_t> prev, std::vector<std::uint8_t> last)
      : std::runtime_error("contagion dynamics did not reach a fixed point"),
        previous(std::move(prev)),
        last(std::move(last)) {}
  std::vector<std::uint8_t> previous;
  std::vector<std::uint8_t> last;
};

/// Finite-population potential-outcome model. Holds a pointer to the graph,
/// which must outlive it. Immutable after construction.
class OutcomeModel {
 public:
  OutcomeModel(OutcomeKind kind, const DirectedGraph& g, OutcomeParams params, FrozenState state)
      : kind_(kind), g_(&g), params_(params), state_(std::move(state)) {
    const std::size_t n = g.size();
    if (state_.eps.size() != n || state_.delta.size() != n || state_.gamma.size() != n ||
        state_.y0.size() != n)
      throw std::invalid_argument("frozen state length differs from unit count");
    validate();
    if (kind_ == OutcomeKind::UganderMult) {
      if (g.is_symmetric()) {
        homophily_ = laplacian_homophily_vector(g).h;
      } else {
        // D^{-1} L is defined for undirected graphs; use the symmetrized graph.
        auto e = g.edges();
        homophily_ = laplacian_homophily_vector(DirectedGraph::from_edges(n, e, false)).h;
      }
    }
    if (kind_ == OutcomeKind::LinearCascade) {
      // Sum_{j=0..J} beta^j Atilde^j eps does not depend on Z.
      noise_part_ = state_.eps;
      std::vector<double> x = state_.eps, next(n);
      double bj = 1.0;
      for (std::size_t j = 1; j <= params_.linear.truncation; ++j) {
        in_mean(x, next);
        x.swap(next);
        bj *= params_.linear.beta;
        for (std::size_t i = 0; i < n; ++i) noise_part_[i] += bj * x[i];
      }
    }
  }

  OutcomeKind kind() const noexcept { return kind_; }
  const DirectedGraph& graph() const noexcept { return *g_; }
  const OutcomeParams& params() const noexcept { return params_; }
  const FrozenState& state() const noexcept { return state_; }
  const std::vector<double>& homophily() const noexcept { return homophily_; }

  std::vector<double> evaluate(std::span<const std::uint8_t> z) const {
    if (z.size() != g_->size()) throw std::invalid_argument("assignment length differs from unit count");
    switch (kind_) {
      case OutcomeKind::UganderMult: return evaluate_ugander(z);
      case OutcomeKind::LinearCascade: return evaluate_linear(z);
      case OutcomeKind::Contagion: return evaluate_contagion(z);
    }
    return {};
  }

  std::vector<double> evaluate(const Assignment& a) const { return evaluate(a.z); }

  /// Ugander baseline Y_i(0) = (a + b h_i + sigma eps_i) d_i / dbar.
  double ugander_baseline(Unit i) const {
    const auto& p = params_.ugander;
    double dbar = g_->mean_in_degree();
    if (dbar == 0.0) return 0.0;
    return (p.a + p.b * homophily_[i] + p.sigma * state_.eps[i]) *
           static_cast<double>(g_->in_degree(i)) / dbar;
  }

 private:
  void validate() const {
    if (kind_ == OutcomeKind::LinearCascade && params_.linear.beta == 1.0)
      throw std::invalid_argument("linear model needs beta != 1");
  }

  // y_i = mean of x over in-neighbors of i; 0 when i has none.
  void in_mean(std::span<const double> x, std::vector<double>& y) const {
    for (Unit i = 0; i < g_->size(); ++i) {
      auto nb = g_->in_neighbors(i);
      if (nb.empty()) {
        y[i] = 0.0;
        continue;
      }
      double s = 0.0;
      for (Unit j : nb) s += x[j];
      y[i] = s / static_cast<double>(nb.size());
    }
  }

  template <class T>
  double in_fraction(Unit i, std::span<const T> x) const {
    auto nb = g_->in_neighbors(i);
    if (nb.empty()) return 0.0;
    double s = 0.0;
    for (Unit j : nb) s += x[j];
    return s / static_cast<double>(nb.size());
  }

  std::vector<double> evaluate_ugander(std::span<const std::uint8_t> z) const {
    const std::size_t n = g_->size();
    std::vector<double> y(n);
    for (Unit i = 0; i < n; ++i) {
      y[i] = ugander_baseline(i) *
             (1.0 + state_.delta[i] * z[i] + state_.gamma[i] * in_fraction(i, z));
    }
    return y;
  }

  std::vector<double> evaluate_linear(std::span<const std::uint8_t> z) const {
    const auto& p = params_.linear;
    const std::size_t n = g_->size();
    std::vector<double> x(z.begin(), z.end()), next(n), spill(n, 0.0);
    double bj = 1.0;
    for (std::size_t j = 1; j <= p.truncation; ++j) {
      in_mean(x, next);
      x.swap(next);
      bj *= p.beta;
      for (std::size_t i = 0; i < n; ++i) spill[i] += bj * x[i];
    }
    std::vector<double> y(n);
    const double base = p.alpha / (1.0 - p.beta);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = base + p.gamma * (z[i] + spill[i]) + noise_part_[i];
    return y;
  }

  // Synchronous threshold updates from the frozen Y^0 until a fixed point.
  std::vector<double> evaluate_contagion(std::span<const std::uint8_t> z) const {
    const auto& p = params_.contagion;
    const std::size_t n = g_->size();
    std::vector<std::uint8_t> cur = state_.y0, next(n);
    std::vector<double> treated_frac(n);
    for (Unit i = 0; i < n; ++i) treated_frac[i] = in_fraction(i, z);
    for (std::size_t step = 0; step < p.max_steps; ++step) {
      std::span<const std::uint8_t> cs(cur);
      for (Unit i = 0; i < n; ++i) {
        double s = p.alpha + p.beta * in_fraction(i, cs) + p.delta * treated_frac[i] +
                   p.gamma * z[i] + state_.eps[i];
        next[i] = s > 0.0 ? 1 : 0;
      }
      if (next == cur) return std::vector<double>(cur.begin(), cur.end());
      cur.swap(next);
    }
    throw ContagionError(next, cur);
  }

  OutcomeKind kind_;
  const DirectedGraph* g_;
  OutcomeParams params_;
  FrozenState state_;
  std::vector<double> homophily_;
  std::vector<double> noise_part_;
};

/// Draws the frozen state from `seed`. Each column uses its own substream so
/// one column can be re-seeded without disturbing the others.
inline FrozenState draw_frozen_state(std::size_t n, const OutcomeParams& params,
                                     std::uint64_t seed) {
  FrozenState s;
  Rng eps_rng = Rng::substream(seed, {1});
  Rng delta_rng = Rng::substream(seed, {2});
  Rng gamma_rng = Rng::substream(seed, {3});
  Rng y0_rng = Rng::substream(seed, {4});
  const auto& u = params.ugander;
  s.eps.resize(n);
  s.delta.resize(n);
  s.gamma.resize(n);
  s.y0.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.eps[i] = eps_rng.normal(0.0, 1.0);
    s.delta[i] = u.delta_var > 0 ? delta_rng.normal(u.delta_mean, std::sqrt(u.delta_var)) : u.delta_mean;
    s.gamma[i] = u.gamma_var > 0 ? gamma_rng.normal(u.gamma_mean, std::sqrt(u.gamma_var)) : u.gamma_mean;
    s.y0[i] = y0_rng.bernoulli(params.contagion.y0_prob) ? 1 : 0;
  }
  return s;
}

inline OutcomeModel build_model(OutcomeKind kind, const DirectedGraph& g,
                                const OutcomeParams& params, std::uint64_t seed) {
  return OutcomeModel(kind, g, params, draw_frozen_state(g.size(), params, seed));
}

struct PotentialOutcomes {
  std::vector<double> y1;   // Y_i(all treated)
  std::vector<double> y0;   // Y_i(all control)
  std::vector<double> tau;  // y1 - y0
  double tte = 0.0;
};

inline PotentialOutcomes potential_outcomes(const OutcomeModel& m) {
  const std::size_t n = m.graph().size();
  PotentialOutcomes po;
  po.y1 = m.evaluate(std::vector<std::uint8_t>(n, 1));
  po.y0 = m.evaluate(std::vector<std::uint8_t>(n, 0));
  po.tau.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    po.tau[i] = po.y1[i] - po.y0[i];
    s += po.tau[i];
  }
  po.tte = n ? s / static_cast<double>(n) : 0.0;
  return po;
}

inline double true_tte(const OutcomeModel& m) { return potential_outcomes(m).tte; }

/// Mean unit-level effect over a subset (the TTE of the sub-population).
template <class Units>
double subset_tte(std::span<const double> tau, const Units& subset) {
  double s = 0.0;
  std::size_t k = 0;
  for (Unit i : subset) {
    s += tau[i];
    ++k;
  }
  if (k == 0) throw std::invalid_argument("subset_tte: empty subset");
  return s / static_cast<double>(k);
}

/// `unit,eps,delta,gamma,y0` text table.
inline void write_frozen_state(std::ostream& out, const FrozenState& s) {
  out << "unit,eps,delta,gamma,y0\n";
  char buf[128];
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d\n", i, s.eps[i], s.delta[i],
                  s.gamma[i], int(s.y0[i]));
    out << buf;
  }
}

inline FrozenState read_frozen_state(std::istream& in) {
  FrozenState s;
  std::string line;
  std::size_t lineno = 0;
  std::size_t expect = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("unit", 0) == 0) continue;
    std::istringstream ls(line);
    std::string field[5];
    for (auto& f : field)
      if (!std::getline(ls, f, ',')) throw ParseError(lineno, "expected 5 columns");
    try {
      if (std::stoull(field[0]) != expect) throw ParseError(lineno, "units must be listed in order");
      s.eps.push_back(std::stod(field[1]));
      s.delta.push_back(std::stod(field[2]));
      s.gamma.push_back(std::stod(field[3]));
      int y0 = std::stoi(field[4]);
      if (y0 != 0 && y0 != 1) throw ParseError(lineno, "y0 must be 0 or 1");
      s.y0.push_back(static_cast<std::uint8_t>(y0));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad numeric field");
    }
    ++expect;
  }
  return s;
}

}  // namespace netiso
