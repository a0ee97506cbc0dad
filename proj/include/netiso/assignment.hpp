#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/graph.hpp"
#include "netiso/isolation.hpp"
#include "netiso/rng.hpp"

namespace netiso {

/// One stratum of a matched-pairs design: two or three isolated units, exactly
/// one of which is treated.
struct Stratum {
  std::vector<Unit> units;  // in sorted-by-degree order
  Unit treated = 0;
};

/// Realized treatment vector plus the isolated-unit split that produced it.
/// Under cluster designs every unit in `s1` has its whole closed
/// in-neighborhood treated and every unit in `s0` has none treated.
struct Assignment {
  std::vector<std::uint8_t> z;
  std::vector<Unit> s1;
  std::vector<Unit> s0;
  std::vector<Stratum> strata;  // matched-pairs designs only

  std::size_t size() const noexcept { return z.size(); }
};

namespace detail {

inline Assignment expose_treated(const DirectedGraph& g, const IsolatedSet& s,
                                 std::vector<Unit> treated) {
  Assignment a;
  a.z.assign(g.size(), 0);
  std::vector<char> in_s1(g.size(), 0);
  for (Unit i : treated) in_s1[i] = 1;
  for (Unit i : s.members) (in_s1[i] ? a.s1 : a.s0).push_back(i);
  for (Unit i : a.s1) {
    a.z[i] = 1;
    for (Unit j : g.in_neighbors(i)) a.z[j] = 1;
  }
  return a;
}

inline void require_two(const IsolatedSet& s) {
  if (s.size() < 2)
    throw std::invalid_argument("isolated set has " + std::to_string(s.size()) +
                                " unit(s); a two-arm split needs at least 2");
}

}  // namespace detail

/// Uniform k-subset of `units` by partial Fisher-Yates; returns the chosen
/// units and leaves the rest in `rest`.
inline std::vector<Unit> complete_randomization_split(std::vector<Unit> units, std::size_t k,
                                                      Rng& rng, std::vector<Unit>* rest = nullptr) {
  for (std::size_t i = 0; i < k; ++i) std::swap(units[i], units[i + rng.below(units.size() - i)]);
  if (rest) rest->assign(units.begin() + static_cast<std::ptrdiff_t>(k), units.end());
  units.resize(k);
  return units;
}

/// Completely randomizes floor(|S|/2) isolated units to treatment and treats
/// their closed in-neighborhoods; everything else stays at 0.
inline Assignment cluster_complete_randomization(const DirectedGraph& g, const IsolatedSet& s,
                                                 Rng& rng) {
  detail::require_two(s);
  return detail::expose_treated(g, s, complete_randomization_split(s.members, s.size() / 2, rng));
}

/// Matched-pairs randomization on in-degree. Isolated units are sorted by
/// in-degree descending (ties by unit index), adjacent units are paired, and
/// with odd |S| the last stratum holds three units. One unit per stratum is
/// treated uniformly at random.
inline Assignment matched_pairs_randomization(const DirectedGraph& g, const IsolatedSet& s,
                                              Rng& rng) {
  detail::require_two(s);
  std::vector<Unit> order = s.members;
  std::sort(order.begin(), order.end(), [&](Unit a, Unit b) {
    auto da = g.in_degree(a), db = g.in_degree(b);
    return da != db ? da > db : a < b;
  });
  const std::size_t pairs = order.size() / 2;
  std::vector<Stratum> strata(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    strata[k].units = {order[2 * k], order[2 * k + 1]};
  }
  if (order.size() % 2 == 1) strata.back().units.push_back(order.back());
  std::vector<Unit> treated;
  for (auto& st : strata) {
    st.treated = st.units[rng.below(st.units.size())];
    treated.push_back(st.treated);
  }
  Assignment a = detail::expose_treated(g, s, std::move(treated));
  a.strata = std::move(strata);
  return a;
}

/// Independent Bernoulli(p) treatment for every unit; no isolated structure.
inline Assignment bernoulli_assignment(std::size_t n, double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Bernoulli p must lie in (0, 1)");
  Assignment a;
  a.z.resize(n);
  for (auto& zi : a.z) zi = rng.bernoulli(p) ? 1 : 0;
  return a;
}

enum class Arm { TreatedIsolated, ControlIsolated, Spillover, Background };

inline const char* to_string(Arm a) {
  switch (a) {
    case Arm::TreatedIsolated: return "treated_isolated";
    case Arm::ControlIsolated: return "control_isolated";
    case Arm::Spillover: return "spillover";
    case Arm::Background: return "background";
  }
  return "?";
}

/// Per-unit arm labels: isolated units by arm; other treated units are
/// spillover (treated as part of an isolated unit's neighborhood, or by a
/// Bernoulli coin); untreated non-isolated units are background.
inline std::vector<Arm> arms(const Assignment& a) {
  std::vector<Arm> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.z[i] ? Arm::Spillover : Arm::Background;
  for (Unit i : a.s1) out[i] = Arm::TreatedIsolated;
  for (Unit i : a.s0) out[i] = Arm::ControlIsolated;
  return out;
}

inline void write_assignment_csv(std::ostream& out, const Assignment& a) {
  out << "unit,z,arm\n";
  auto labels = arms(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    out << i << ',' << int(a.z[i]) << ',' << to_string(labels[i]) << '\n';
}

}  // namespace netiso
