#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "netiso/harness.hpp"

namespace netiso {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void check_keys(const nlohmann::json& j, const char* section,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + section);
  }
}

}  // namespace detail

/// Reads an experiment config from JSON. Missing keys keep their defaults;
/// unknown keys are rejected. Layout:
///
///   { "network":   { "model", "n", "seed", "file", "directed", "params": {...} },
///     "model":     { "kind", "seed", "params": {...} },
///     "methods":   [ "RI+rdim", ... ],
///     "replications", "seed", "bernoulli_p", "threads",
///     "selection": { "candidates": [...], "n_pre", "mode", "l2_weight",
///                    "common_random_numbers" },
///     "scaling":   { "grid": [200, 600, 1000] } }
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::read_opt;
  ExperimentConfig c;
  try {
    detail::check_keys(j, "config",
                       {"network", "model", "methods", "replications", "seed", "bernoulli_p",
                        "threads", "selection", "scaling"});
    if (j.contains("network")) {
      const auto& n = j.at("network");
      detail::check_keys(n, "network", {"model", "n", "seed", "file", "directed", "params"});
      if (n.contains("model")) c.network.model = parse_network_model(n.at("model").get<std::string>());
      read_opt(n, "n", c.network.n);
      read_opt(n, "seed", c.network.seed);
      read_opt(n, "file", c.network.file);
      read_opt(n, "directed", c.network.directed);
      if (n.contains("params")) {
        const auto& p = n.at("params");
        detail::check_keys(p, "network.params",
                           {"m", "radius", "k", "beta", "p", "block_sizes", "block_probs"});
        auto& gp = c.network.params;
        read_opt(p, "m", gp.ba_edges_per_arrival);
        read_opt(p, "radius", gp.rg_radius);
        read_opt(p, "k", gp.sw_ring_degree);
        read_opt(p, "beta", gp.sw_rewire_prob);
        read_opt(p, "p", gp.er_edge_prob);
        read_opt(p, "block_sizes", gp.sbm_block_sizes);
        read_opt(p, "block_probs", gp.sbm_block_probs);
      }
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      detail::check_keys(m, "model", {"kind", "seed", "params"});
      if (m.contains("kind")) c.model.kind = parse_outcome_kind(m.at("kind").get<std::string>());
      read_opt(m, "seed", c.model.seed);
      if (m.contains("params")) {
        const auto& p = m.at("params");
        auto& op = c.model.params;
        switch (c.model.kind) {
          case OutcomeKind::UganderMult:
            detail::check_keys(p, "model.params",
                               {"a", "b", "sigma", "delta_mean", "delta_var", "gamma_mean", "gamma_var"});
            read_opt(p, "a", op.ugander.a);
            read_opt(p, "b", op.ugander.b);
            read_opt(p, "sigma", op.ugander.sigma);
            read_opt(p, "delta_mean", op.ugander.delta_mean);
            read_opt(p, "delta_var", op.ugander.delta_var);
            read_opt(p, "gamma_mean", op.ugander.gamma_mean);
            read_opt(p, "gamma_var", op.ugander.gamma_var);
            break;
          case OutcomeKind::LinearCascade:
            detail::check_keys(p, "model.params", {"alpha", "beta", "gamma", "truncation"});
            read_opt(p, "alpha", op.linear.alpha);
            read_opt(p, "beta", op.linear.beta);
            read_opt(p, "gamma", op.linear.gamma);
            read_opt(p, "truncation", op.linear.truncation);
            break;
          case OutcomeKind::Contagion:
            detail::check_keys(p, "model.params",
                               {"alpha", "beta", "delta", "gamma", "y0_prob", "max_steps"});
            read_opt(p, "alpha", op.contagion.alpha);
            read_opt(p, "beta", op.contagion.beta);
            read_opt(p, "delta", op.contagion.delta);
            read_opt(p, "gamma", op.contagion.gamma);
            read_opt(p, "y0_prob", op.contagion.y0_prob);
            read_opt(p, "max_steps", op.contagion.max_steps);
            break;
        }
      }
    }
    if (j.contains("methods")) {
      c.methods = j.at("methods").get<std::vector<std::string>>();
      for (const auto& m : c.methods) parse_method(m);
    }
    read_opt(j, "replications", c.replications);
    read_opt(j, "seed", c.seed);
    read_opt(j, "bernoulli_p", c.bernoulli_p);
    read_opt(j, "threads", c.threads);
    if (j.contains("selection")) {
      const auto& s = j.at("selection");
      detail::check_keys(s, "selection",
                         {"candidates", "n_pre", "mode", "l2_weight", "common_random_numbers"});
      read_opt(s, "candidates", c.selection.candidates);
      for (const auto& id : c.selection.candidates) parse_candidate_id(id);
      read_opt(s, "n_pre", c.selection.n_pre);
      if (s.contains("mode")) {
        auto mode = s.at("mode").get<std::string>();
        if (mode == "with_cr") c.selection.options.mode = SurrogateMode::WithCR;
        else if (mode == "no_cr") c.selection.options.mode = SurrogateMode::NoCR;
        else throw ConfigError("selection.mode must be with_cr or no_cr");
      }
      read_opt(s, "l2_weight", c.selection.options.l2_weight);
      read_opt(s, "common_random_numbers", c.selection.options.common_random_numbers);
    }
    if (j.contains("scaling")) {
      detail::check_keys(j.at("scaling"), "scaling", {"grid"});
      read_opt(j.at("scaling"), "grid", c.scaling_grid);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.selection.options.threads = c.threads;
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace netiso
