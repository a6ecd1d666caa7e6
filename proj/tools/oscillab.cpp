#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "oscillab/explab.hpp"

namespace {

struct Help {
  const char* name;
  const char* text;
};

const Help kCommands[] = {
    {"knapp", "Bochner-Riesz ratios on cap-adapted inputs across dyadic widths"},
    {"wavepackets", "wave packet reconstruction, orthogonality, support and two-scale checks"},
    {"transequi", "mass of tangent packets on smaller tangent tubes against r/rho"},
    {"rescale", "parabolic rescaling identity and domain bookkeeping"},
    {"decouple", "curvature of the decoupling surface and empirical decoupling ratio"},
    {"partition", "polynomial partitioning of a uniform point cloud"},
    {"exponents", "critical exponents and admissible ranges"},
    {"gauss", "Gauss map identity"},
    {"hessian", "mixed Hessian determinant"},
    {"spectra", "eigenvalues of the Phi Jacobian"},
    {"l2proxy", "L^2 boundedness of fixed-time slices"},
    {"broadnorm", "broad norm vanishing, monotonicity in A and subadditivity"},
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("oscillab"));
  CLI::App app{"oscillab: desk-scale experiments for oscillatory integral operators"};
  app.require_subcommand(1);
  bool quiet = false, strict = false;
  app.add_flag("-q,--quiet", quiet, "only log warnings");
  app.add_flag("--strict", strict, "exit with status 2 if any row fails");

  struct Sub {
    CLI::App* app;
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Sub> subs;
  subs.reserve(std::size(kCommands));
  for (const auto& c : kCommands) {
    subs.push_back({app.add_subcommand(c.name, c.text), {}, {}, {}});
    Sub& s = subs.back();
    s.app->add_option("--config", s.config, "TOML or JSON config file")->check(CLI::ExistingFile);
    for (const auto& key : osc::config_keys()) {
      if (key == "experiment") continue;
      std::string names = "--" + key;
      if (key.starts_with("out_")) names += ",--" + key.substr(4);  // --csv, --json, --plot, --data
      s.options[key] = s.app->add_option(names, s.values[key], "override " + key);
    }
  }
  CLI11_PARSE(app, argc, argv);
  if (quiet) spdlog::set_level(spdlog::level::warn);

  try {
    for (Sub& s : subs) {
      if (!s.app->parsed()) continue;
      const std::string name = s.app->get_name();
      osc::ExperimentConfig cfg = osc::default_config(name);
      if (!s.config.empty()) {
        osc::load_config_file(cfg, s.config);
        if (cfg.experiment != name)
          throw osc::ArgumentError("config names experiment '" + cfg.experiment +
                                   "' but the subcommand is '" + name + "'");
      }
      for (const auto& [key, opt] : s.options)
        if (opt->count() > 0) osc::set_option(cfg, key, s.values[key]);
      cfg.validate();
      const auto rows = osc::run_experiment(cfg);
      if (!cfg.out_csv.empty()) osc::emit(rows, "csv", cfg.out_csv);
      if (!cfg.out_json.empty()) osc::emit(rows, "json", cfg.out_json);
      if (!cfg.out_plot.empty()) {
        if (cfg.out_csv.empty()) throw osc::ArgumentError("--plot needs --csv");
        osc::emit_plotscript(cfg.out_csv, cfg.out_plot);
      }
      if (cfg.out_csv.empty() && cfg.out_json.empty()) std::cout << osc::to_csv(rows);
      int failed = 0;
      for (const auto& r : rows) failed += !r.pass;
      spdlog::info("{}: {} rows, {} failed", name, rows.size(), failed);
      if (strict && failed) return 2;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
