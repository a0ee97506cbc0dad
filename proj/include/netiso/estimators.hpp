#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/assignment.hpp"
#include "netiso/graph.hpp"

namespace netiso {

/// Observed outcomes restricted to the isolated set. Restricted estimators
/// only ever see this view, never the full outcome vector.
struct IsolatedObservations {
  struct StratumObs {
    double treated = 0.0;
    std::vector<double> controls;
  };
  std::vector<double> treated;   // Y_i, i in S1
  std::vector<double> control;   // Y_i, i in S0
  std::vector<StratumObs> strata;
  std::size_t s_size = 0;
};

inline IsolatedObservations observe_isolated(std::span<const double> y, const Assignment& a) {
  if (y.size() != a.size()) throw std::invalid_argument("outcome length differs from assignment length");
  IsolatedObservations obs;
  for (Unit i : a.s1) obs.treated.push_back(y[i]);
  for (Unit i : a.s0) obs.control.push_back(y[i]);
  obs.s_size = a.s1.size() + a.s0.size();
  for (const auto& st : a.strata) {
    IsolatedObservations::StratumObs so;
    so.treated = y[st.treated];
    for (Unit u : st.units)
      if (u != st.treated) so.controls.push_back(y[u]);
    obs.strata.push_back(std::move(so));
  }
  return obs;
}

namespace detail {
inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}
}  // namespace detail

/// Restricted difference in means: mean over S1 minus mean over S0.
inline double rdim(const IsolatedObservations& obs) {
  if (obs.treated.empty() || obs.control.empty())
    throw std::invalid_argument("rdim: both isolated arms must be nonempty");
  return detail::mean(obs.treated) - detail::mean(obs.control);
}

inline double rdim(std::span<const double> y, const Assignment& a) {
  return rdim(observe_isolated(y, a));
}

/// Restricted matched estimator: sum_k (n_k / |S|) * tau_k, where tau_k is
/// the treated outcome minus the mean control outcome in stratum k (the
/// within-stratum IPW estimate with treatment probability 1 / n_k).
inline double rmat(const IsolatedObservations& obs) {
  if (obs.strata.empty()) throw std::invalid_argument("rmat: assignment carries no strata");
  std::size_t total = 0;
  for (const auto& st : obs.strata) total += 1 + st.controls.size();
  double est = 0.0;
  for (const auto& st : obs.strata) {
    if (st.controls.empty()) throw std::invalid_argument("rmat: stratum without a control unit");
    double nk = static_cast<double>(1 + st.controls.size());
    est += nk / static_cast<double>(total) * (st.treated - detail::mean(st.controls));
  }
  return est;
}

inline double rmat(std::span<const double> y, const Assignment& a) {
  return rmat(observe_isolated(y, a));
}

/// Naive difference in means over all units by realized Z.
inline double naive_dim(std::span<const double> y, std::span<const std::uint8_t> z) {
  if (y.size() != z.size()) throw std::invalid_argument("outcome length differs from assignment length");
  double s1 = 0, s0 = 0;
  std::size_t n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (z[i]) {
      s1 += y[i];
      ++n1;
    } else {
      s0 += y[i];
      ++n0;
    }
  }
  if (n1 == 0 || n0 == 0) throw std::invalid_argument("naive_dim: a treatment group is empty");
  return s1 / static_cast<double>(n1) - s0 / static_cast<double>(n0);
}

struct ExposureWeights {
  std::vector<double> treated;  // E1_i / pi1_i
  std::vector<double> control;  // E0_i / pi0_i
};

/// Inverse-probability exposure weights under Bernoulli(p): a unit is fully
/// treated (control) exposed when its whole closed in-neighborhood is 1 (0),
/// which happens with probability p^{d_i+1} ((1-p)^{d_i+1}).
inline ExposureWeights bernoulli_exposure_weights(const DirectedGraph& g,
                                                  std::span<const std::uint8_t> z, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Bernoulli p must lie in (0, 1)");
  if (z.size() != g.size()) throw std::invalid_argument("assignment length differs from unit count");
  const std::size_t n = g.size();
  ExposureWeights w;
  w.treated.assign(n, 0.0);
  w.control.assign(n, 0.0);
  for (Unit i = 0; i < n; ++i) {
    bool all1 = z[i] == 1, all0 = z[i] == 0;
    for (Unit j : g.in_neighbors(i)) {
      all1 = all1 && z[j] == 1;
      all0 = all0 && z[j] == 0;
    }
    double k = static_cast<double>(g.in_degree(i) + 1);
    if (all1) w.treated[i] = std::pow(p, -k);
    if (all0) w.control[i] = std::pow(1.0 - p, -k);
  }
  return w;
}

/// Horvitz-Thompson estimate of the TTE under a Bernoulli(p) design.
inline double ber_ht(std::span<const double> y, std::span<const std::uint8_t> z,
                     const DirectedGraph& g, double p) {
  auto w = bernoulli_exposure_weights(g, z, p);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * (w.treated[i] - w.control[i]);
  return s / static_cast<double>(y.size());
}

struct HajekEstimate {
  double value = 0.0;
  bool empty_treated = false;  // no fully treated-exposed unit; arm contributed 0
  bool empty_control = false;
};

/// Hajek estimate: each arm's weighted sum normalized by its own weight total.
inline HajekEstimate ber_hajek(std::span<const double> y, std::span<const std::uint8_t> z,
                               const DirectedGraph& g, double p) {
  auto w = bernoulli_exposure_weights(g, z, p);
  double num1 = 0, den1 = 0, num0 = 0, den0 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num1 += y[i] * w.treated[i];
    den1 += w.treated[i];
    num0 += y[i] * w.control[i];
    den0 += w.control[i];
  }
  HajekEstimate h;
  h.empty_treated = den1 == 0.0;
  h.empty_control = den0 == 0.0;
  h.value = (h.empty_treated ? 0.0 : num1 / den1) - (h.empty_control ? 0.0 : num0 / den0);
  return h;
}

/// Conditional variance of the difference in means given S under complete
/// randomization with n1 treated:
///   V2(1)/n1 + V2(0)/n0 - V2(tau)/|S|,
/// with every V2 the (|S|-1)-denominator variance over all of S.
inline double neyman_conditional_variance(std::span<const double> y1, std::span<const double> y0,
                                          std::size_t n1) {
  const std::size_t s = y1.size();
  if (s < 2 || y0.size() != s) throw std::invalid_argument("neyman variance needs |S| >= 2 paired outcomes");
  if (n1 == 0 || n1 >= s) throw std::invalid_argument("neyman variance needs both arms nonempty");
  auto var = [s](auto&& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < s; ++i) m += f(i);
    m /= static_cast<double>(s);
    double v = 0.0;
    for (std::size_t i = 0; i < s; ++i) v += (f(i) - m) * (f(i) - m);
    return v / static_cast<double>(s - 1);
  };
  double v1 = var([&](std::size_t i) { return y1[i]; });
  double v0 = var([&](std::size_t i) { return y0[i]; });
  double vt = var([&](std::size_t i) { return y1[i] - y0[i]; });
  const double ds = static_cast<double>(s);
  return v1 / static_cast<double>(n1) + v0 / (ds - static_cast<double>(n1)) - vt / ds;
}

}  // namespace netiso
