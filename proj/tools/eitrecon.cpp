// Command-line front end: run, preset, validate, oracle-check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "eit/errors.hpp"
#include "eit/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run(const std::string& path) {
  const auto config = eit::load_config(path);
  const auto result = eit::run_experiment(config);
  const auto& rec = result.reconstruction;
  std::printf("pixels %zu  ||V||_F %.6g  delta %.6g  a %.6g\n", result.pixels.size(),
              result.v.frobenius_norm(), result.v_delta.noise_level,
              result.bounds.contrast_bound);
  std::printf("objective %.6g  iterations %d  converged %s  kkt %.3g\n", rec.objective,
              rec.iterations, rec.converged ? "yes" : "no", rec.kkt_residual);
  std::printf("artifacts in %s\n", eit::resolve_output_dir(config).string().c_str());
  return 0;
}

int preset(const std::string& name, const std::string& out) {
  const auto text = eit::to_json(eit::preset(name)).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot write " << out << '\n';
    return 1;
  }
  os << text;
  return 0;
}

int validate(const std::string& path) {
  const auto config = eit::load_config(path);
  std::cout << "ok: " << config.name << " (" << config.phantom.inclusions.size()
            << " inclusions)\n";
  return 0;
}

int oracle(const std::string& path, const std::string& out) {
  const auto report = eit::oracle_check(eit::load_config(path));
  std::printf("%4s %4s %14s %14s %10s\n", "j", "kind", "fem", "analytic", "rel.err");
  for (const auto& e : report.entries)
    std::printf("%4d %4s %14.6e %14.6e %10.3e\n", e.j, eit::to_string(e.kind), e.fem, e.analytic,
                e.relative_error);
  std::printf("max relative error %.3e  max |offdiag| %.3e  ||V||_F %.6g\n",
              report.max_relative_error, report.max_offdiagonal, report.v_norm);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) {
      std::cerr << "cannot write " << out << '\n';
      return 1;
    }
    os << eit::to_json(report).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotonicity-constrained residual reconstruction for linearized EIT on the unit disk"};
  app.require_subcommand(1);

  std::string config_path;
  std::string name;
  std::string out;

  auto* run_cmd = app.add_subcommand("run", "run the full pipeline for a config file");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* preset_cmd = app.add_subcommand("preset", "print a preset config");
  preset_cmd->add_option("name", name, "figure1, figure3 or concentric")->required();
  preset_cmd->add_option("--out", out, "write to this file instead of stdout");

  auto* validate_cmd = app.add_subcommand("validate", "check a config file");
  validate_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "compare FEM data with the concentric-disk solution");
  oracle_cmd->add_option("config", config_path, "concentric experiment config (JSON)")->required();
  oracle_cmd->add_option("--out", out, "also write the comparison as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run(config_path);
    if (*preset_cmd) return preset(name, out);
    if (*validate_cmd) return validate(config_path);
    if (*oracle_cmd) return oracle(config_path, out);
  } catch (const eit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const eit::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const eit::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
