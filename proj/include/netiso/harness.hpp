#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netiso/assignment.hpp"
#include "netiso/estimators.hpp"
#include "netiso/generators.hpp"
#include "netiso/graph.hpp"
#include "netiso/isolation.hpp"
#include "netiso/outcomes.hpp"
#include "netiso/parallel.hpp"
#include "netiso/rng.hpp"
#include "netiso/selection.hpp"

namespace netiso {

// ---------------------------------------------------------------------------
// Methods

enum class Design { BER, RI, AWRI };
enum class Estimator { HT, Hajek, DIM, RDIM, RMAT };

struct Method {
  Design design = Design::RI;
  Estimator estimator = Estimator::RDIM;

  std::string str() const {
    static const char* d[] = {"BER", "RI", "AWRI"};
    static const char* e[] = {"ht", "hajek", "dim", "rdim", "rmat"};
    return std::string(d[int(design)]) + "+" + e[int(estimator)];
  }
};

/// Accepts BER+{ht,hajek,dim} and {RI,AWRI}+{rdim,rmat}.
inline Method parse_method(const std::string& s) {
  auto plus = s.find('+');
  if (plus == std::string::npos) throw std::invalid_argument("unknown method id '" + s + "'");
  std::string d = s.substr(0, plus), e = s.substr(plus + 1);
  Method m;
  if (d == "BER") {
    m.design = Design::BER;
    if (e == "ht") m.estimator = Estimator::HT;
    else if (e == "hajek") m.estimator = Estimator::Hajek;
    else if (e == "dim") m.estimator = Estimator::DIM;
    else throw std::invalid_argument("unknown method id '" + s + "'");
  } else if (d == "RI" || d == "AWRI") {
    m.design = d == "RI" ? Design::RI : Design::AWRI;
    if (e == "rdim") m.estimator = Estimator::RDIM;
    else if (e == "rmat") m.estimator = Estimator::RMAT;
    else throw std::invalid_argument("unknown method id '" + s + "'");
  } else {
    throw std::invalid_argument("unknown method id '" + s + "'");
  }
  return m;
}

inline std::vector<std::string> all_method_ids() {
  return {"BER+ht", "BER+hajek", "BER+dim", "RI+rdim", "RI+rmat", "AWRI+rdim", "AWRI+rmat"};
}

// ---------------------------------------------------------------------------
// Configuration

struct NetworkSpec {
  std::optional<std::string> file;  // edge list; overrides the generator
  bool directed = false;
  NetworkModel model = NetworkModel::BA;
  std::size_t n = 1200;
  std::uint64_t seed = 1;
  GeneratorParams params;

  std::string label() const { return file ? std::string("file") : to_string(model); }
};

struct ModelSpec {
  OutcomeKind kind = OutcomeKind::UganderMult;
  std::uint64_t seed = 1;
  OutcomeParams params;
};

struct SelectionSpec {
  std::vector<std::string> candidates = default_candidate_ids();
  std::size_t n_pre = 1000;
  SurrogateOptions options;
};

struct ExperimentConfig {
  NetworkSpec network;
  ModelSpec model;
  std::vector<std::string> methods = all_method_ids();
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  double bernoulli_p = 0.5;
  SelectionSpec selection;
  std::vector<std::size_t> scaling_grid;
  std::size_t threads = 1;
};

inline DirectedGraph build_network(const NetworkSpec& spec) {
  if (spec.file) {
    std::ifstream in(*spec.file);
    if (!in) throw std::runtime_error("cannot open edge list '" + *spec.file + "'");
    return load_edge_list(in, spec.directed);
  }
  return generate(spec.model, spec.n, spec.params, spec.seed);
}

// ---------------------------------------------------------------------------
// Results

/// Per-method Monte Carlo summary. `bias_sq` is the squared mean error,
/// `var` the (1/R) variance of the errors and `mse = bias_sq + var`.
struct ExperimentSummary {
  std::string method, network, model;
  std::size_t n = 0;
  std::size_t replications = 0;
  double mse = 0, bias_sq = 0, var = 0;
  double mean_s = 0, mean_s1 = 0;
  std::size_t degenerate = 0;  // replications excluded after an estimator error

  // Extra diagnostics, not part of the CSV report.
  double true_tte = 0;
  double mean_error = 0;
  double se_mean_error = 0;   // standard error of mean_error
  double se_mse = 0;          // standard error of mean squared error
  double mean_tau_s_error = 0;  // mean of tau_S - tau (isolation designs)
  double mse_tau_s = 0;         // mean of (tau_S - tau)^2
  std::size_t hajek_flagged = 0;
};

struct ReplicationRecord {
  bool ok = false;
  double error = 0;
  double tau_s_error = 0;
  double s_size = 0, s1_size = 0;
  bool hajek_flag = false;
};

/// Graph, outcome model and ground truth for one configuration. AWRI weight
/// selection runs at most once per configuration, on first use.
class PreparedExperiment {
 public:
  explicit PreparedExperiment(const ExperimentConfig& cfg)
      : cfg_(cfg),
        graph_(std::make_unique<DirectedGraph>(build_network(cfg.network))),
        model_(std::make_unique<OutcomeModel>(
            build_model(cfg.model.kind, *graph_, cfg.model.params, cfg.model.seed))),
        po_(potential_outcomes(*model_)) {}

  const ExperimentConfig& config() const { return cfg_; }
  const DirectedGraph& graph() const { return *graph_; }
  const OutcomeModel& model() const { return *model_; }
  const PotentialOutcomes& truth() const { return po_; }

  const SelectionReport& selection() {
    if (!selection_) {
      std::uint64_t s = Rng::substream(cfg_.seed, {hash_tag("weight-selection")}).seed();
      selection_ = select_weight(*graph_, cfg_.selection.candidates, cfg_.selection.n_pre, s,
                                 cfg_.selection.options);
    }
    return *selection_;
  }

  /// One replication of `method`; the RNG is keyed by (seed, method, r).
  ReplicationRecord replicate(const Method& method, std::size_t r, const WeightVector* w) const {
    Rng rng = Rng::substream(cfg_.seed, {hash_tag(method.str().c_str()), r});
    const auto& g = *graph_;
    ReplicationRecord rec;
    try {
      if (method.design == Design::BER) {
        Assignment a = bernoulli_assignment(g.size(), cfg_.bernoulli_p, rng);
        auto y = model_->evaluate(a);
        double est = 0;
        switch (method.estimator) {
          case Estimator::HT: est = ber_ht(y, a.z, g, cfg_.bernoulli_p); break;
          case Estimator::Hajek: {
            auto h = ber_hajek(y, a.z, g, cfg_.bernoulli_p);
            est = h.value;
            rec.hajek_flag = h.empty_treated || h.empty_control;
            break;
          }
          default: est = naive_dim(y, a.z); break;
        }
        rec.error = est - po_.tte;
        rec.ok = true;
        return rec;
      }
      IsolatedSet s = method.design == Design::RI ? random_isolation(g, rng)
                                                  : weighted_random_isolation(g, *w, rng);
      rec.s_size = static_cast<double>(s.size());
      rec.tau_s_error = subset_tte(std::span<const double>(po_.tau), s.members) - po_.tte;
      Assignment a = method.estimator == Estimator::RMAT ? matched_pairs_randomization(g, s, rng)
                                                         : cluster_complete_randomization(g, s, rng);
      rec.s1_size = static_cast<double>(a.s1.size());
      auto y = model_->evaluate(a);
      double est = method.estimator == Estimator::RMAT ? rmat(y, a) : rdim(y, a);
      rec.error = est - po_.tte;
      rec.ok = true;
    } catch (const std::invalid_argument&) {
      rec.ok = false;
    } catch (const ContagionError&) {
      rec.ok = false;
    }
    return rec;
  }

 private:
  ExperimentConfig cfg_;
  std::unique_ptr<DirectedGraph> graph_;
  std::unique_ptr<OutcomeModel> model_;
  PotentialOutcomes po_;
  std::optional<SelectionReport> selection_;
};

inline ExperimentSummary summarize(const std::vector<ReplicationRecord>& recs, double tte) {
  ExperimentSummary s;
  s.replications = recs.size();
  s.true_tte = tte;
  std::size_t k = 0;
  for (const auto& r : recs) {
    if (!r.ok) {
      ++s.degenerate;
      continue;
    }
    ++k;
    s.mean_error += r.error;
    s.mean_s += r.s_size;
    s.mean_s1 += r.s1_size;
    s.mean_tau_s_error += r.tau_s_error;
    s.mse_tau_s += r.tau_s_error * r.tau_s_error;
    if (r.hajek_flag) ++s.hajek_flagged;
  }
  if (k == 0) return s;
  const double K = static_cast<double>(k);
  s.mean_error /= K;
  s.mean_s /= K;
  s.mean_s1 /= K;
  s.mean_tau_s_error /= K;
  s.mse_tau_s /= K;
  double m2 = 0, sq_mean = 0;
  for (const auto& r : recs)
    if (r.ok) {
      double d = r.error - s.mean_error;
      m2 += d * d;
      sq_mean += r.error * r.error;
    }
  s.var = m2 / K;
  s.bias_sq = s.mean_error * s.mean_error;
  s.mse = s.bias_sq + s.var;
  sq_mean /= K;
  double v4 = 0;
  for (const auto& r : recs)
    if (r.ok) {
      double d = r.error * r.error - sq_mean;
      v4 += d * d;
    }
  if (k > 1) {
    s.se_mean_error = std::sqrt(m2 / (K - 1) / K);
    s.se_mse = std::sqrt(v4 / (K - 1) / K);
  }
  return s;
}

inline ExperimentSummary run_method(PreparedExperiment& exp, const std::string& method_id) {
  const Method method = parse_method(method_id);
  const auto& cfg = exp.config();
  const WeightVector* w = method.design == Design::AWRI ? &exp.selection().weights : nullptr;
  std::vector<ReplicationRecord> recs(cfg.replications);
  parallel_for(cfg.replications, cfg.threads,
               [&](std::size_t r) { recs[r] = exp.replicate(method, r, w); });
  ExperimentSummary s = summarize(recs, exp.truth().tte);
  s.method = method.str();
  s.network = cfg.network.label();
  s.model = to_string(cfg.model.kind);
  s.n = exp.graph().size();
  return s;
}

inline std::vector<ExperimentSummary> run_experiment(PreparedExperiment& exp) {
  std::vector<ExperimentSummary> out;
  for (const auto& m : exp.config().methods) out.push_back(run_method(exp, m));
  return out;
}

inline std::vector<ExperimentSummary> run_experiment(const ExperimentConfig& cfg) {
  PreparedExperiment exp(cfg);
  return run_experiment(exp);
}

/// Seeds for grid point n, derived from the configured seeds.
inline ExperimentConfig scaling_point(const ExperimentConfig& cfg, std::size_t n) {
  ExperimentConfig c = cfg;
  c.network.file.reset();
  c.network.n = n;
  c.network.seed = Rng::substream(cfg.network.seed, {hash_tag("scaling-network"), n}).seed();
  c.model.seed = Rng::substream(cfg.model.seed, {hash_tag("scaling-model"), n}).seed();
  c.seed = Rng::substream(cfg.seed, {hash_tag("scaling-run"), n}).seed();
  return c;
}

/// Regenerates the network at each grid size and runs every method.
inline std::vector<ExperimentSummary> run_scaling(const ExperimentConfig& cfg) {
  if (cfg.scaling_grid.empty()) throw std::invalid_argument("run_scaling: empty grid");
  if (cfg.network.file) throw std::invalid_argument("run_scaling needs a generated network");
  std::vector<ExperimentSummary> out;
  for (std::size_t n : cfg.scaling_grid) {
    auto rows = run_experiment(scaling_point(cfg, n));
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { CSV, Markdown };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::CSV;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw std::invalid_argument("unknown report format '" + s + "'");
}

inline constexpr const char* kReportHeader =
    "method,network,model,n,R,mse,bias_sq,var,mean_s,mean_s1,degenerate";

inline std::string emit_csv(const std::vector<ExperimentSummary>& rows) {
  std::string out = std::string(kReportHeader) + "\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%zu\n",
                  r.method.c_str(), r.network.c_str(), r.model.c_str(), r.n, r.replications, r.mse,
                  r.bias_sq, r.var, r.mean_s, r.mean_s1, r.degenerate);
    out += buf;
  }
  return out;
}

/// Methods as rows, one MSE / Bias^2 / Var column triple per (network, n).
inline std::string emit_markdown(const std::vector<ExperimentSummary>& rows) {
  std::vector<std::string> methods, groups;
  std::map<std::pair<std::string, std::string>, const ExperimentSummary*> cell;
  auto push_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : rows) {
    std::string g = r.network + " n=" + std::to_string(r.n) + " " + r.model;
    push_unique(methods, r.method);
    push_unique(groups, g);
    cell[{r.method, g}] = &r;
  }
  std::string out = "| DESIGN+estimator |";
  for (const auto& g : groups) out += " " + g + " MSE | Bias^2 | Var |";
  out += "\n|---|";
  for (std::size_t i = 0; i < groups.size(); ++i) out += "---:|---:|---:|";
  out += "\n";
  char buf[128];
  for (const auto& m : methods) {
    out += "| " + m + " |";
    for (const auto& g : groups) {
      auto it = cell.find({m, g});
      if (it == cell.end()) {
        out += " | | |";
        continue;
      }
      std::snprintf(buf, sizeof buf, " %.4g | %.4g | %.4g |", it->second->mse, it->second->bias_sq,
                    it->second->var);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

inline std::string emit_report(const std::vector<ExperimentSummary>& rows, ReportFormat fmt) {
  return fmt == ReportFormat::CSV ? emit_csv(rows) : emit_markdown(rows);
}

/// Parses the CSV produced by emit_csv (report columns only).
inline std::vector<ExperimentSummary> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ExperimentSummary> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kReportHeader) throw ParseError(lineno, "unexpected report header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
    if (f.size() != 11) throw ParseError(lineno, "expected 11 columns");
    ExperimentSummary r;
    try {
      r.method = f[0];
      r.network = f[1];
      r.model = f[2];
      r.n = std::stoull(f[3]);
      r.replications = std::stoull(f[4]);
      r.mse = std::stod(f[5]);
      r.bias_sq = std::stod(f[6]);
      r.var = std::stod(f[7]);
      r.mean_s = std::stod(f[8]);
      r.mean_s1 = std::stod(f[9]);
      r.degenerate = std::stoull(f[10]);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad numeric field");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace netiso
