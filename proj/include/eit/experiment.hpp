#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eit/geometry.hpp"
#include "eit/monotonicity.hpp"
#include "eit/ntd.hpp"
#include "eit/solver.hpp"

namespace eit {

enum class SolverKind { Frobenius, Spectral };
enum class ComparisonMode { None, NoBeta, NoA, Tikhonov };

struct ExperimentConfig {
  std::string name = "experiment";
  Phantom phantom;
  int n1 = 16;
  int mesh_refinement = 64;
  double mesh_angular_scale = 1.0;
  bool mesh_conform = true;  // snap rings onto disks centred at the origin
  int partition_resolution = 16;
  int quadrature_subdivisions = 16;
  int classify_samples = 8;
  double delta_rel = 0.0;
  std::uint64_t seed = 42;
  std::optional<double> gamma_min;       // defaults to the smallest phantom contrast
  std::optional<double> beta_delta_abs;  // defaults to the injected noise level
  SolverKind solver = SolverKind::Frobenius;
  ComparisonMode comparison_mode = ComparisonMode::None;
  double tikhonov_lambda = 1e-5;
  double tol = 1e-8;
  int max_iter = 50000;
  int canvas = 256;
  bool dump_sensitivities = false;
  bool dump_mesh = false;
  std::string output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Parses and validates; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// figure1, figure3 or concentric. Throws ConfigError for other names.
ExperimentConfig preset(const std::string& name);

/// Concentric disk of radius rho and contrast gamma at the origin.
ExperimentConfig concentric_preset(double rho = 0.3, double gamma = 1.0);

struct PixelRecord {
  int id;
  Point center;
  double area;
  PixelClass pixel_class;
  double beta;
  double upper;
  double a_hat;
};

struct StageTimings {
  double mesh = 0, forward = 0, noise = 0, sensitivities = 0, bounds = 0, solve = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  MeasurementMatrix v;
  MeasurementMatrix v_delta;
  PixelPartition partition;
  std::vector<SensitivityMatrix> sensitivities;
  std::vector<PixelClass> classes;
  BoundsVector bounds;
  Eigen::VectorXd solve_upper;  // bounds handed to the solver for the chosen mode
  ReconstructionResult reconstruction;
  std::vector<PixelRecord> pixels;
  StageTimings timings;
  std::vector<std::filesystem::path> artifacts;
};

/// The report without wall times, so identical configs give identical bytes.
nlohmann::json make_report(const ExperimentResult& result);
nlohmann::json make_timings(const StageTimings& timings);

/// Output directory after applying the EIT_OUTPUT_ROOT override for relative paths.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

/// mesh -> V -> noise -> S_k -> beta -> solve. Stage failures are rethrown
/// with the stage name prefixed; when write_artifacts is set, files already
/// written are removed on failure.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_artifacts = true);

/// Grayscale ASCII PGM: each canvas pixel whose centre lies in a partition
/// pixel gets round(255 * clamp(a_hat / a, 0, 1)); everything else is 0.
std::string render_pgm(const Eigen::VectorXd& coefficients, const PixelPartition& partition,
                       double a, int canvas = 256);

/// Writes the PGM to `path` and the "x_center,y_center,a_hat" table next to
/// it (same stem, .csv).
void render_image(const Eigen::VectorXd& coefficients, const PixelPartition& partition, double a,
                  const std::filesystem::path& path, int canvas = 256);

struct OracleEntry {
  int j;
  CurrentKind kind;
  double fem;
  double analytic;
  double relative_error;
};

struct OracleReport {
  std::vector<OracleEntry> entries;
  double max_relative_error = 0;
  double max_offdiagonal = 0;  // absolute
  double v_norm = 0;
  double diagonal_error_norm = 0;  // ||diag(V) - analytic||_2
};

/// FEM diagonal of V against analytic_concentric. The phantom must be a
/// single disk centred at the origin.
OracleReport oracle_check(const ExperimentConfig& config);
nlohmann::json to_json(const OracleReport& report);

}  // namespace eit
