#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "netiso/config.hpp"

using namespace netiso;
using nlohmann::json;

TEST(Config, DefaultsFromEmptyObject) {
  auto c = parse_config(json::object());
  EXPECT_EQ(c.network.model, NetworkModel::BA);
  EXPECT_EQ(c.network.n, 1200u);
  EXPECT_EQ(c.replications, 1000u);
  EXPECT_EQ(c.bernoulli_p, 0.5);
  EXPECT_EQ(c.selection.n_pre, 1000u);
  EXPECT_EQ(c.selection.candidates, default_candidate_ids());
  EXPECT_EQ(c.methods, all_method_ids());
  EXPECT_EQ(c.model.params.ugander.a, 1.0);
}

TEST(Config, FullDocument) {
  auto j = json::parse(R"({
    "network": {"model": "SW", "n": 300, "seed": 9, "params": {"k": 6, "beta": 0.1}},
    "model": {"kind": "contagion", "seed": 4, "params": {"alpha": -0.5, "max_steps": 50}},
    "methods": ["RI+rdim", "BER+hajek"],
    "replications": 20, "seed": 77, "bernoulli_p": 0.3, "threads": 2,
    "selection": {"candidates": ["degree^1"], "n_pre": 10, "mode": "no_cr",
                  "l2_weight": 4.0, "common_random_numbers": true},
    "scaling": {"grid": [100, 200]}
  })");
  auto c = parse_config(j);
  EXPECT_EQ(c.network.model, NetworkModel::SW);
  EXPECT_EQ(c.network.n, 300u);
  EXPECT_EQ(c.network.seed, 9u);
  EXPECT_EQ(*c.network.params.sw_ring_degree, 6u);
  EXPECT_EQ(*c.network.params.sw_rewire_prob, 0.1);
  EXPECT_EQ(c.model.kind, OutcomeKind::Contagion);
  EXPECT_EQ(c.model.params.contagion.alpha, -0.5);
  EXPECT_EQ(c.model.params.contagion.max_steps, 50u);
  EXPECT_EQ(c.methods, (std::vector<std::string>{"RI+rdim", "BER+hajek"}));
  EXPECT_EQ(c.replications, 20u);
  EXPECT_EQ(c.seed, 77u);
  EXPECT_EQ(c.bernoulli_p, 0.3);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_EQ(c.selection.options.threads, 2u);
  EXPECT_EQ(c.selection.options.mode, SurrogateMode::NoCR);
  EXPECT_EQ(c.selection.options.l2_weight, 4.0);
  EXPECT_TRUE(c.selection.options.common_random_numbers);
  EXPECT_EQ(c.scaling_grid, (std::vector<std::size_t>{100, 200}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* bad : {R"({"replication": 5})", R"({"network": {"size": 5}})",
                          R"({"model": {"kind": "ugander", "params": {"alpha": 1}}})",
                          R"({"methods": ["RI+ht"]})", R"({"selection": {"mode": "both"}})",
                          R"({"selection": {"candidates": ["pagerank^1"]}})",
                          R"({"network": {"model": "lattice"}})", R"({"replications": "many"})"}) {
    EXPECT_THROW(parse_config(json::parse(bad)), ConfigError) << bad;
  }
}

TEST(Config, LoadFromFile) {
  std::string path = testing::TempDir() + "netiso_cfg.json";
  {
    std::ofstream f(path);
    f << R"({"network": {"model": "ER", "n": 50}})";
  }
  auto c = load_config(path);
  EXPECT_EQ(c.network.model, NetworkModel::ER);
  std::remove(path.c_str());
  EXPECT_THROW(load_config(path), ConfigError);
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  EXPECT_THROW(load_config(path), ConfigError);
  std::remove(path.c_str());
}
