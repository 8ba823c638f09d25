#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

#include "fnls/config.hpp"
#include "fnls/experiments.hpp"

namespace {

using Runner = std::function<int(const fnls::ExperimentConfig&, const std::string&, std::ostream&)>;

int parse_threads_env(int fallback) {
  const char* env = std::getenv("FNLS_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw fnls::Error(fnls::ErrorKind::ConfigError, "FNLS_THREADS must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized ground states and dynamics of fractional NLS"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  const std::map<std::string, std::pair<std::string, Runner>> commands = {
      {"ground", {"Minimize the energy on V(c)", fnls::run_ground}},
      {"mc-curve", {"Sweep m(c) over sweep.c_list", fnls::run_mc_curve}},
      {"evolve", {"Evolve rescale(u_c, dynamics.lambda)", fnls::run_evolve}},
      {"classify", {"Classify rescale(u_c, lambda) for sweep.lambda_list", fnls::run_classify}},
      {"dichotomy", {"Classify and evolve each lambda in sweep.lambda_list", fnls::run_dichotomy}},
      {"gn-probe", {"Compare GN ratios of the ground state and random fields", fnls::run_gn_probe}},
      {"virial-check", {"Check the localized virial identity along a trajectory", fnls::run_virial_check}},
  };
  std::map<CLI::App*, Runner> runners;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "Config file")->required();
    sub->add_option("--out", out_dir, "Output directory (default: output.directory)");
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    runners[sub] = entry.second;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fnls::kExitConfig;
  }

  try {
    fnls::ExperimentConfig cfg = fnls::load_config(config_path);
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub->count("--seed") > 0) cfg.seed = seed;
      if (sub->count("--threads") > 0) cfg.threads = threads;
      cfg.threads = parse_threads_env(cfg.threads);
      const std::string dir = sub->count("--out") > 0 ? out_dir : cfg.directory;
      return runners.at(sub)(cfg, dir, std::cerr);
    }
  } catch (const fnls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fnls::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fnls::kExitNumerical;
  }
  return fnls::kExitOk;
}
