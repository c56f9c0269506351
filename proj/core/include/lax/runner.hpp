#pragma once

#include "lax/baker.hpp"
#include "lax/io.hpp"

namespace lax {

struct TyurinSpec {
  Complex z;
  IntVector h;  // full diagonal, or first-n entries to be mirrored
  uint64_t conjugator_seed = 0;  // 0: identity conjugator
};

struct FlowSpec {
  InvariantId chi;
  int puncture_index = 0;
  int m = 0;
  double t_end = 0.5;
  double dt = 0.01;
  double tol = 1e-8;
};

struct ExperimentConfig {
  Family family = Family::A;
  int n = 2;
  std::vector<Puncture> punctures;
  std::vector<TyurinSpec> tyurin;
  std::vector<FlowSpec> flows;
  int samples = 24;
  uint64_t seed = 1;
  std::string out = ".";

  AlgebraSpec algebra() const;
  ConfigPtr lax_config() const;
};

ExperimentConfig parse_experiment(const Json& j);
ExperimentConfig load_experiment(const std::string& path);

struct RunOptions {
  bool has_seed = false;
  uint64_t seed = 0;
  double tol = 0;  // 0: per-subcommand defaults
  std::string out;
  bool quiet = false;
};

// Exit status: 0 ok, 2 schema violation, 3 numerical failure,
// 4 tolerance failure (named in the output).
constexpr int kExitOk = 0, kExitSchema = 2, kExitNumerical = 3, kExitTolerance = 4;

int run(const std::string& subcommand, const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace lax
