// netiso command line driver.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "netiso/config.hpp"
#include "netiso/netiso.hpp"

using namespace netiso;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string format = "csv";
  std::size_t threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON configuration file");
  sub->add_option("--seed", c.seed, "master seed (overrides the config)");
  sub->add_option("--out", c.out, "output path, '-' for stdout");
  sub->add_option("--format", c.format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  sub->add_option("--threads", c.threads, "worker threads (overrides the config)");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? parse_config(nlohmann::json::object())
                                          : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.threads) {
    cfg.threads = c.threads;
    cfg.selection.options.threads = c.threads;
  }
  return cfg;
}

void write_out(const Common& c, const std::string& text) {
  if (c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
  f << text;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string units_report(const std::string& fmt_name, const std::vector<Unit>& units,
                         std::size_t n) {
  std::ostringstream os;
  if (fmt_name == "markdown") {
    os << "| n | size |\n|---|---|\n| " << n << " | " << units.size() << " |\n\n";
    os << "| unit |\n|---|\n";
    for (Unit u : units) os << "| " << u << " |\n";
  } else {
    os << "unit\n";
    for (Unit u : units) os << u << '\n';
  }
  return os.str();
}

// The weight vector used by `isolate` and `assign`: none means plain RI.
std::optional<WeightVector> resolve_weights(const DirectedGraph& g, const std::string& id) {
  if (id.empty() || id == "none") return std::nullopt;
  return CandidateBuilder(g).build(id);
}

IsolatedSet draw_set(const DirectedGraph& g, const std::optional<WeightVector>& w, Rng& rng) {
  return w ? weighted_random_isolation(g, *w, rng) : random_isolation(g, rng);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isolation-based randomized designs for network experiments"};
  app.require_subcommand(1);

  Common c;
  std::string weights_id, design = "cr";
  std::optional<double> bern_p;

  auto* gen = app.add_subcommand("generate-network", "generate the configured network");
  add_common(gen, c);

  auto* iso = app.add_subcommand("isolate", "draw one isolated set");
  add_common(iso, c);
  iso->add_option("--weights", weights_id, "candidate id such as degree^-1; RI if omitted");

  auto* sel = app.add_subcommand("select-weight", "score the candidate weight vectors");
  add_common(sel, c);

  auto* asg = app.add_subcommand("assign", "draw one treatment assignment");
  add_common(asg, c);
  asg->add_option("--weights", weights_id, "candidate id; RI if omitted");
  asg->add_option("--design", design, "cr, mpr or bernoulli")
      ->check(CLI::IsMember({"cr", "mpr", "bernoulli"}));
  asg->add_option("--p", bern_p, "Bernoulli treatment probability");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo comparison of the configured methods");
  add_common(sim, c);

  auto* scl = app.add_subcommand("scaling", "rerun the methods over scaling.grid");
  add_common(scl, c);

  auto* exp = app.add_subcommand("export-model", "write the frozen outcome-model state");
  add_common(exp, c);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load(c);
    const bool md = c.format == "markdown";

    if (gen->parsed()) {
      if (c.seed) cfg.network.seed = *c.seed;
      auto g = build_network(cfg.network);
      std::ostringstream os;
      if (md) {
        os << "| model | n | edges | mean in-degree | max in-degree | components |\n"
           << "|---|---|---|---|---|---|\n"
           << "| " << cfg.network.label() << " | " << g.size() << " | "
           << g.edge_count() / (cfg.network.directed ? 1 : 2) << " | "
           << fmt("%.4f", g.mean_in_degree()) << " | " << g.max_in_degree() << " | "
           << component_count(g) << " |\n";
      } else {
        write_edge_list(os, g, cfg.network.directed);
      }
      write_out(c, os.str());
    } else if (iso->parsed() || asg->parsed()) {
      auto g = build_network(cfg.network);
      Rng rng = Rng::substream(cfg.seed, {hash_tag(iso->parsed() ? "cli-isolate" : "cli-assign")});
      if (iso->parsed()) {
        IsolatedSet s = draw_set(g, resolve_weights(g, weights_id), rng);
        write_out(c, units_report(c.format, s.sorted(), g.size()));
        return 0;
      }
      Assignment a;
      if (design == "bernoulli") {
        a = bernoulli_assignment(g.size(), bern_p.value_or(cfg.bernoulli_p), rng);
      } else {
        IsolatedSet s = draw_set(g, resolve_weights(g, weights_id), rng);
        a = design == "mpr" ? matched_pairs_randomization(g, s, rng)
                            : cluster_complete_randomization(g, s, rng);
      }
      std::ostringstream os;
      if (md) {
        auto labels = arms(a);
        os << "| unit | z | arm |\n|---|---|---|\n";
        for (std::size_t i = 0; i < a.size(); ++i)
          os << "| " << i << " | " << int(a.z[i]) << " | " << to_string(labels[i]) << " |\n";
      } else {
        write_assignment_csv(os, a);
      }
      write_out(c, os.str());
    } else if (sel->parsed()) {
      auto g = build_network(cfg.network);
      std::uint64_t s = Rng::substream(cfg.seed, {hash_tag("weight-selection")}).seed();
      auto rep = select_weight(g, cfg.selection.candidates, cfg.selection.n_pre, s,
                               cfg.selection.options);
      std::ostringstream os;
      if (md) {
        os << "| candidate | M | SE | chosen |\n|---|---|---|---|\n";
        for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
          const auto& r = rep.candidates[i];
          os << "| " << r.id << " | " << fmt("%.6g", r.estimate.mean) << " | "
             << fmt("%.3g", r.estimate.se) << " | " << (i == rep.chosen ? "*" : "") << " |\n";
        }
      } else {
        write_selection_csv(os, rep);
      }
      write_out(c, os.str());
    } else if (sim->parsed()) {
      write_out(c, emit_report(run_experiment(cfg), parse_report_format(c.format)));
    } else if (scl->parsed()) {
      write_out(c, emit_report(run_scaling(cfg), parse_report_format(c.format)));
    } else if (exp->parsed()) {
      auto g = build_network(cfg.network);
      auto model = build_model(cfg.model.kind, g, cfg.model.params, cfg.model.seed);
      std::ostringstream os;
      write_frozen_state(os, model.state());
      write_out(c, os.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "netiso: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
