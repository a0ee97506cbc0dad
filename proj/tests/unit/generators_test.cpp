#include <gtest/gtest.h>

#include "netiso/generators.hpp"

using namespace netiso;

namespace {
constexpr NetworkModel kModels[] = {NetworkModel::BA, NetworkModel::RG, NetworkModel::SW,
                                    NetworkModel::ER, NetworkModel::SBM};
}

TEST(Generate, SmallWorldEdgeCountIsExact) {
  for (double beta : {0.0, 0.3, 1.0}) {
    GeneratorParams p;
    p.sw_rewire_prob = beta;
    auto g = generate(NetworkModel::SW, 1200, p, 7);
    EXPECT_EQ(g.edge_count() / 2, 6000u) << beta;
  }
}

TEST(Generate, BarabasiAlbertEdgeCountBand) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto g = generate(NetworkModel::BA, 1200, {}, seed);
    std::size_t m = g.edge_count() / 2;
    EXPECT_GE(m, 3580u);
    EXPECT_LE(m, 3610u);
  }
}

TEST(Generate, ErdosRenyiZeroProbabilityIsEmpty) {
  GeneratorParams p;
  p.er_edge_prob = 0.0;
  EXPECT_EQ(generate(NetworkModel::ER, 500, p, 1).edge_count(), 0u);
}

TEST(Generate, DefaultsApproximateReferenceMeanDegrees) {
  // Mean degree of the 1200-unit reference networks, within a few percent.
  struct Target {
    NetworkModel m;
    double mean, tol;
  };
  for (auto t : {Target{NetworkModel::BA, 5.99, 0.05}, Target{NetworkModel::RG, 6.75, 0.4},
                 Target{NetworkModel::SW, 10.0, 1e-12}, Target{NetworkModel::ER, 6.9, 0.4},
                 Target{NetworkModel::SBM, 5.27, 0.4}}) {
    auto g = generate(t.m, 1200, {}, 1);
    EXPECT_NEAR(g.mean_in_degree(), t.mean, t.tol) << to_string(t.m);
  }
}

TEST(Generate, BitReproducibleAndSeedSensitive) {
  for (auto m : kModels) {
    auto a = generate(m, 300, {}, 42);
    auto b = generate(m, 300, {}, 42);
    auto c = generate(m, 300, {}, 43);
    EXPECT_EQ(a, b) << to_string(m);
    EXPECT_NE(a, c) << to_string(m);
    EXPECT_TRUE(a.is_symmetric());
  }
}

TEST(Generate, InvalidParamsThrow) {
  GeneratorParams p;
  p.ba_edges_per_arrival = 0;
  EXPECT_THROW(generate(NetworkModel::BA, 100, p, 1), std::invalid_argument);
  p = {};
  p.rg_radius = 1.5;
  EXPECT_THROW(generate(NetworkModel::RG, 100, p, 1), std::invalid_argument);
  p = {};
  p.sw_ring_degree = 5;
  EXPECT_THROW(generate(NetworkModel::SW, 100, p, 1), std::invalid_argument);
  p = {};
  p.sw_rewire_prob = -0.1;
  EXPECT_THROW(generate(NetworkModel::SW, 100, p, 1), std::invalid_argument);
  p = {};
  p.er_edge_prob = 1.1;
  EXPECT_THROW(generate(NetworkModel::ER, 100, p, 1), std::invalid_argument);
  p = {};
  p.sbm_block_sizes = {50, 40};
  p.sbm_block_probs = {{0.1, 0.01}, {0.01, 0.1}};
  EXPECT_THROW(generate(NetworkModel::SBM, 100, p, 1), std::invalid_argument);
  p.sbm_block_sizes = {50, 50};
  p.sbm_block_probs = {{0.1, 0.02}, {0.01, 0.1}};
  EXPECT_THROW(generate(NetworkModel::SBM, 100, p, 1), std::invalid_argument);
  EXPECT_THROW(generate(NetworkModel::ER, 0, {}, 1), std::invalid_argument);
}

TEST(Generate, CustomSbmRespectsBlocks) {
  GeneratorParams p;
  p.sbm_block_sizes = {30, 30};
  p.sbm_block_probs = {{0.5, 0.0}, {0.0, 0.5}};
  auto g = generate(NetworkModel::SBM, 60, p, 5);
  for (auto [i, j] : g.edges()) EXPECT_EQ(i < 30, j < 30);
}

TEST(Generate, RadiusSolverHitsTarget) {
  double r = rg_radius_for_mean_degree(1200, 6.747);
  EXPECT_NEAR(rg_expected_degree(1200, r), 6.747, 1e-9);
}

TEST(NetworkModelNames, RoundTrip) {
  for (auto m : kModels) EXPECT_EQ(parse_network_model(to_string(m)), m);
  EXPECT_THROW(parse_network_model("lattice"), std::invalid_argument);
}
