#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "netiso/harness.hpp"
#include "support/oracles.hpp"

using namespace netiso;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.network.model = NetworkModel::BA;
  c.network.n = 120;
  c.network.seed = 3;
  c.model.seed = 4;
  c.replications = 60;
  c.seed = 5;
  c.selection.n_pre = 50;
  return c;
}

}  // namespace

TEST(Methods, ParseAndNames) {
  for (const auto& id : all_method_ids()) EXPECT_EQ(parse_method(id).str(), id);
  for (const char* bad : {"BER+rdim", "RI+ht", "AWRI", "XYZ+dim", "RI+"})
    EXPECT_THROW(parse_method(bad), std::invalid_argument) << bad;
}

TEST(RunExperiment, DecompositionIdentityAndDeterminism) {
  auto cfg = small_config();
  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  ASSERT_EQ(a.size(), 7u);
  EXPECT_EQ(emit_csv(a), emit_csv(b));
  for (const auto& r : a) {
    EXPECT_EQ(r.mse, r.bias_sq + r.var) << r.method;
    EXPECT_GE(r.var, 0.0);
    EXPECT_EQ(r.n, 120u);
    EXPECT_EQ(r.replications, 60u);
    if (r.method.rfind("BER", 0) != 0) {
      EXPECT_GT(r.mean_s, 1.0);
      EXPECT_LE(r.mean_s1, r.mean_s / 2 + 1e-12);
      EXPECT_GE(r.mean_s1, r.mean_s / 2 - 0.5 - 1e-12);
    }
  }
}

TEST(RunExperiment, ThreadedEqualsSerial) {
  auto cfg = small_config();
  auto serial = emit_csv(run_experiment(cfg));
  cfg.threads = 4;
  cfg.selection.options.threads = 4;
  EXPECT_EQ(emit_csv(run_experiment(cfg)), serial);
}

TEST(RunExperiment, ConstantOutcomesGiveZeroError) {
  auto cfg = small_config();
  cfg.model.params.ugander = {0.0, 0.0, 0.0, 0.5, 0.01, 1.0, 0.01};
  for (const auto& r : run_experiment(cfg)) {
    EXPECT_EQ(r.mse, 0.0) << r.method;
    EXPECT_EQ(r.bias_sq, 0.0);
    EXPECT_EQ(r.var, 0.0);
  }
}

TEST(RunExperiment, SingleReplicationHasZeroVariance) {
  auto cfg = small_config();
  cfg.replications = 1;
  for (const auto& r : run_experiment(cfg)) {
    EXPECT_EQ(r.var, 0.0);
    EXPECT_EQ(r.mse, r.bias_sq);
  }
}

TEST(RunExperiment, DegenerateReplicationsCounted) {
  // On a complete graph every isolated set has one unit.
  std::string path = testing::TempDir() + "k5.txt";
  {
    std::ofstream f(path);
    f << "0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
  }
  ExperimentConfig cfg;
  cfg.network.file = path;
  cfg.methods = {"RI+rdim", "RI+rmat", "BER+ht"};
  cfg.replications = 20;
  auto rows = run_experiment(cfg);
  EXPECT_EQ(rows[0].degenerate, 20u);
  EXPECT_EQ(rows[1].degenerate, 20u);
  EXPECT_EQ(rows[2].degenerate, 0u);
  EXPECT_EQ(rows[0].network, "file");
  std::remove(path.c_str());
}

TEST(RunMethod, RiRdimBiasIsTauSMinusTau) {
  // Conditional unbiasedness: error - (tau_S - tau) has mean zero.
  ExperimentConfig cfg;
  cfg.network.model = NetworkModel::ER;
  cfg.network.n = 50;
  cfg.network.seed = 2;
  PreparedExperiment exp(cfg);
  Method m{Design::RI, Estimator::RDIM};
  const int R = 10000;
  double s = 0, sq = 0;
  for (int r = 0; r < R; ++r) {
    auto rec = exp.replicate(m, r, nullptr);
    ASSERT_TRUE(rec.ok);
    double d = rec.error - rec.tau_s_error;
    s += d;
    sq += d * d;
  }
  double mean = s / R, se = std::sqrt((sq / R - mean * mean) / (R - 1));
  EXPECT_LE(std::abs(mean), 4 * se);
}

TEST(RunMethod, BernoulliHtUnbiased) {
  ExperimentConfig cfg;
  cfg.network.model = NetworkModel::BA;
  cfg.network.n = 40;
  cfg.network.params.ba_edges_per_arrival = 1;
  cfg.replications = 20000;
  cfg.methods = {"BER+ht"};
  PreparedExperiment exp(cfg);
  auto r = run_method(exp, "BER+ht");
  EXPECT_LE(std::abs(r.mean_error), 4 * r.se_mean_error);
  EXPECT_THROW(run_method(exp, "BER+foo"), std::invalid_argument);
}

TEST(RunMethod, AwriSelectionRunsOnce) {
  auto cfg = small_config();
  PreparedExperiment exp(cfg);
  const auto* first = &exp.selection();
  run_method(exp, "AWRI+rdim");
  run_method(exp, "AWRI+rmat");
  EXPECT_EQ(&exp.selection(), first);
  EXPECT_EQ(exp.selection().candidates.size(), 12u);
}

TEST(Scaling, RegeneratesNetworkPerGridPoint) {
  auto cfg = small_config();
  cfg.methods = {"RI+rdim"};
  cfg.replications = 10;
  cfg.scaling_grid = {60, 90};
  auto rows = run_scaling(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].n, 60u);
  EXPECT_EQ(rows[1].n, 90u);
  EXPECT_EQ(emit_csv(rows), emit_csv(run_scaling(cfg)));
  EXPECT_NE(scaling_point(cfg, 60).network.seed, scaling_point(cfg, 90).network.seed);
  cfg.scaling_grid.clear();
  EXPECT_THROW(run_scaling(cfg), std::invalid_argument);
}

TEST(Report, EmptyIsHeaderOnly) {
  EXPECT_EQ(emit_csv({}), std::string(kReportHeader) + "\n");
  EXPECT_TRUE(parse_report_csv(emit_csv({})).empty());
}

TEST(Report, CsvRoundTrip) {
  ExperimentSummary r;
  r.method = "AWRI+rmat";
  r.network = "BA";
  r.model = "ugander";
  r.n = 600;
  r.replications = 500;
  r.mse = 0.25;
  r.bias_sq = 0.0625;
  r.var = 0.1875;
  r.mean_s = 97.5;
  r.mean_s1 = 48.25;
  r.degenerate = 3;
  auto back = parse_report_csv(emit_csv({r}));
  ASSERT_EQ(back.size(), 1u);
  const auto& b = back[0];
  EXPECT_EQ(b.method, r.method);
  EXPECT_EQ(b.network, r.network);
  EXPECT_EQ(b.model, r.model);
  EXPECT_EQ(b.n, r.n);
  EXPECT_EQ(b.replications, r.replications);
  EXPECT_EQ(b.mse, r.mse);
  EXPECT_EQ(b.bias_sq, r.bias_sq);
  EXPECT_EQ(b.var, r.var);
  EXPECT_EQ(b.mean_s, r.mean_s);
  EXPECT_EQ(b.mean_s1, r.mean_s1);
  EXPECT_EQ(b.degenerate, r.degenerate);
  EXPECT_THROW(parse_report_csv("wrong,header\n"), ParseError);
  EXPECT_THROW(parse_report_csv(std::string(kReportHeader) + "\nRI+rdim,BA\n"), ParseError);
}

TEST(Report, MarkdownTriples) {
  ExperimentSummary a, b;
  a.method = "RI+rdim";
  b.method = "BER+dim";
  for (auto* r : {&a, &b}) {
    r->network = "BA";
    r->model = "ugander";
    r->n = 600;
  }
  a.mse = 0.5;
  a.bias_sq = 0.25;
  a.var = 0.25;
  std::string md = emit_markdown({a, b});
  EXPECT_NE(md.find("| DESIGN+estimator | BA n=600 ugander MSE | Bias^2 | Var |"), std::string::npos) << md;
  EXPECT_NE(md.find("| RI+rdim | 0.5 | 0.25 | 0.25 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| BER+dim |"), std::string::npos);
  EXPECT_EQ(emit_report({a}, ReportFormat::CSV), emit_csv({a}));
  EXPECT_EQ(parse_report_format("markdown"), ReportFormat::Markdown);
  EXPECT_THROW(parse_report_format("xml"), std::invalid_argument);
}
