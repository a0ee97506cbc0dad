// Method comparison at desk scale: BA network, ugander outcomes.
// Usage: demo_desk_table [n] [replications] [seed]
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "netiso/netiso.hpp"

using namespace netiso;

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  cfg.network.model = NetworkModel::BA;
  cfg.network.n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 600;
  cfg.replications = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 500;
  cfg.seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  PreparedExperiment exp(cfg);
  const auto& sel = exp.selection();
  std::printf("true TTE %.4f, selected weights %s\n\n", exp.truth().tte, sel.weights.id().c_str());
  std::cout << emit_markdown(run_experiment(exp));
  return 0;
}
