#include <CLI11.hpp>

#include "lax/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"laxkit: spectral transforms of Lax systems with Tyurin data"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  uint64_t seed = 0;
  double tol = 0;
  bool quiet = false;
  bool seed_given = false;

  const std::vector<std::string> subs = {"space", "curve", "gradcheck", "mop", "flow",
                                         "commute", "baker", "theta", "all"};
  const char* descr[] = {
      "build the Lax-space basis and report its dimension",
      "reconstruct the spectral-curve coefficients r_j(q)",
      "closed-form gradients vs the finite-difference oracle",
      "build M-operators and report matching/tangency residuals",
      "integrate a Lax flow and emit drift diagnostics",
      "pairwise flow-commutation refinement study",
      "orthonormalization and reconstruction residuals over samples",
      "Riemann theta identity checks",
      "run the full suite"};
  for (size_t i = 0; i < subs.size(); ++i) {
    auto* sub = app.add_subcommand(subs[i], descr[i]);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--tol", tol, "override per-check tolerances");
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_flag("--quiet", quiet, "print failures only");
  }

  CLI11_PARSE(app, argc, argv);
  std::string name = app.get_subcommands().front()->get_name();

  try {
    lax::ExperimentConfig cfg = lax::load_experiment(config_path);
    lax::RunOptions opt;
    opt.has_seed = seed_given;
    opt.seed = seed;
    opt.tol = tol;
    opt.out = out_dir;
    opt.quiet = quiet;
    return lax::run(name, cfg, opt);
  } catch (const lax::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return lax::kExitSchema;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return lax::kExitNumerical;
  }
}
