#include "eit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "eit/errors.hpp"
#include "eit/fem.hpp"

namespace eit {

using nlohmann::json;

namespace {

const char* to_string(SolverKind s) { return s == SolverKind::Spectral ? "spectral" : "frobenius"; }

const char* to_string(ComparisonMode m) {
  switch (m) {
    case ComparisonMode::None: return "none";
    case ComparisonMode::NoBeta: return "no_beta";
    case ComparisonMode::NoA: return "no_a";
    case ComparisonMode::Tikhonov: return "tikhonov";
  }
  return "?";
}

[[noreturn]] void config_fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

json shape_json(const Inclusion& inc) {
  json j = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {{"shape", "disk"}, {"center", point_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          return {{"shape", "rectangle"},
                  {"lower_left", point_json(s.lower_left)},
                  {"upper_right", point_json(s.upper_right)}};
        } else {
          return {{"shape", "ellipse"},
                  {"center", point_json(s.center)},
                  {"semi_x", s.semi_x},
                  {"semi_y", s.semi_y}};
        }
      },
      inc.shape);
  j["contrast"] = inc.contrast;
  return j;
}

double get_number(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) config_fail(field + "." + key, "missing");
  if (!obj.at(key).is_number()) config_fail(field + "." + key, "must be a number");
  return obj.at(key).get<double>();
}

Point get_point(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) config_fail(field + "." + key, "missing");
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    config_fail(field + "." + key, "must be an [x, y] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const std::string& field) {
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&k](const char* a) { return k == a; }))
      config_fail(field.empty() ? k : field + "." + k, "unknown key");
  }
}

Inclusion parse_inclusion(const json& j, const std::string& field) {
  if (!j.is_object()) config_fail(field, "must be an object");
  if (!j.contains("shape") || !j.at("shape").is_string()) config_fail(field + ".shape", "missing");
  const std::string kind = j.at("shape").get<std::string>();
  Inclusion inc;
  if (kind == "disk") {
    reject_unknown(j, {"shape", "center", "radius", "contrast"}, field);
    inc.shape = Disk{get_point(j, "center", field), get_number(j, "radius", field)};
  } else if (kind == "rectangle") {
    reject_unknown(j, {"shape", "lower_left", "upper_right", "contrast"}, field);
    inc.shape = Rectangle{get_point(j, "lower_left", field), get_point(j, "upper_right", field)};
  } else if (kind == "ellipse") {
    reject_unknown(j, {"shape", "center", "semi_x", "semi_y", "contrast"}, field);
    inc.shape = Ellipse{get_point(j, "center", field), get_number(j, "semi_x", field),
                        get_number(j, "semi_y", field)};
  } else {
    config_fail(field + ".shape", "unknown shape '" + kind + "'");
  }
  inc.contrast = get_number(j, "contrast", field);
  return inc;
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) config_fail(key, "must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) config_fail(key, "must be a string");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) config_fail(key, "must be a nonnegative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) config_fail(key, "must be an integer");
    } else {
      if (!v.is_number()) config_fail(key, "must be a number");
    }
    out = v.get<T>();
  } catch (const json::exception& e) {
    config_fail(key, e.what());
  }
}

template <class F>
auto timed(double& seconds, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto out = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// Rethrows with the stage name prefixed, keeping the error category.
template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[") + name + "] " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(std::string("[") + name + "] " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("[") + name + "] " + e.what());
  }
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text,
                std::vector<std::filesystem::path>& written) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  written.push_back(path);
  os << text;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n1 < 1 || n1 > 64) config_fail("n1", "must lie in [1, 64]");
  if (mesh_refinement < 1 || mesh_refinement > 512)
    config_fail("mesh_refinement", "must lie in [1, 512]");
  if (!(mesh_angular_scale > 0.0 && mesh_angular_scale <= 16.0))
    config_fail("mesh_angular_scale", "must lie in (0, 16]");
  if (partition_resolution < 2 || partition_resolution > 256)
    config_fail("partition_resolution", "must lie in [2, 256]");
  if (quadrature_subdivisions < 1 || quadrature_subdivisions > 256)
    config_fail("quadrature_subdivisions", "must lie in [1, 256]");
  if (classify_samples < 4 || classify_samples > 256)
    config_fail("classify_samples", "must lie in [4, 256]");
  if (!(delta_rel >= 0.0 && delta_rel <= 10.0)) config_fail("delta_rel", "must lie in [0, 10]");
  if (gamma_min && !(*gamma_min > 0.0)) config_fail("gamma_min", "must be positive");
  if (beta_delta_abs && !(*beta_delta_abs >= 0.0))
    config_fail("beta_delta_abs", "must be nonnegative");
  if (!(tikhonov_lambda > 0.0)) config_fail("tikhonov_lambda", "must be positive");
  if (!(tol > 0.0)) config_fail("tol", "must be positive");
  if (max_iter < 1) config_fail("max_iter", "must be at least 1");
  if (canvas < 8 || canvas > 4096) config_fail("canvas", "must lie in [8, 4096]");
  if (output_dir.empty()) config_fail("output_dir", "must not be empty");
  try {
    phantom.validate();
  } catch (const DomainError& e) {
    config_fail("phantom", e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json phantom = json::array();
  for (const auto& inc : c.phantom.inclusions) phantom.push_back(shape_json(inc));
  json j = {{"name", c.name},
            {"phantom", phantom},
            {"n1", c.n1},
            {"mesh_refinement", c.mesh_refinement},
            {"mesh_angular_scale", c.mesh_angular_scale},
            {"mesh_conform", c.mesh_conform},
            {"partition_resolution", c.partition_resolution},
            {"quadrature_subdivisions", c.quadrature_subdivisions},
            {"classify_samples", c.classify_samples},
            {"delta_rel", c.delta_rel},
            {"seed", c.seed},
            {"solver", to_string(c.solver)},
            {"comparison_mode", to_string(c.comparison_mode)},
            {"tikhonov_lambda", c.tikhonov_lambda},
            {"tol", c.tol},
            {"max_iter", c.max_iter},
            {"canvas", c.canvas},
            {"dump_sensitivities", c.dump_sensitivities},
            {"dump_mesh", c.dump_mesh},
            {"output_dir", c.output_dir}};
  if (c.gamma_min) j["gamma_min"] = *c.gamma_min;
  if (c.beta_delta_abs) j["beta_delta_abs"] = *c.beta_delta_abs;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"name", "phantom", "n1", "mesh_refinement", "mesh_angular_scale", "mesh_conform",
                  "partition_resolution", "quadrature_subdivisions", "classify_samples",
                  "delta_rel", "seed", "gamma_min", "beta_delta_abs", "solver", "comparison_mode",
                  "tikhonov_lambda", "tol", "max_iter", "canvas", "dump_sensitivities",
                  "dump_mesh", "output_dir"},
                 "");
  ExperimentConfig c;
  read_field(j, "name", c.name);
  if (j.contains("phantom")) {
    const json& p = j.at("phantom");
    if (!p.is_array()) config_fail("phantom", "must be an array of inclusions");
    for (std::size_t i = 0; i < p.size(); ++i)
      c.phantom.inclusions.push_back(parse_inclusion(p[i], "phantom[" + std::to_string(i) + "]"));
  }
  read_field(j, "n1", c.n1);
  read_field(j, "mesh_refinement", c.mesh_refinement);
  read_field(j, "mesh_angular_scale", c.mesh_angular_scale);
  read_field(j, "mesh_conform", c.mesh_conform);
  read_field(j, "partition_resolution", c.partition_resolution);
  read_field(j, "quadrature_subdivisions", c.quadrature_subdivisions);
  read_field(j, "classify_samples", c.classify_samples);
  read_field(j, "delta_rel", c.delta_rel);
  read_field(j, "seed", c.seed);
  if (j.contains("gamma_min")) {
    double g = 0;
    read_field(j, "gamma_min", g);
    c.gamma_min = g;
  }
  if (j.contains("beta_delta_abs")) {
    double d = 0;
    read_field(j, "beta_delta_abs", d);
    c.beta_delta_abs = d;
  }
  if (j.contains("solver")) {
    std::string s;
    read_field(j, "solver", s);
    if (s == "frobenius") c.solver = SolverKind::Frobenius;
    else if (s == "spectral") c.solver = SolverKind::Spectral;
    else config_fail("solver", "must be 'frobenius' or 'spectral'");
  }
  if (j.contains("comparison_mode")) {
    std::string s;
    read_field(j, "comparison_mode", s);
    if (s == "none") c.comparison_mode = ComparisonMode::None;
    else if (s == "no_beta") c.comparison_mode = ComparisonMode::NoBeta;
    else if (s == "no_a") c.comparison_mode = ComparisonMode::NoA;
    else if (s == "tikhonov") c.comparison_mode = ComparisonMode::Tikhonov;
    else config_fail("comparison_mode", "must be none, no_beta, no_a or tikhonov");
  }
  read_field(j, "tikhonov_lambda", c.tikhonov_lambda);
  read_field(j, "tol", c.tol);
  read_field(j, "max_iter", c.max_iter);
  read_field(j, "canvas", c.canvas);
  read_field(j, "dump_sensitivities", c.dump_sensitivities);
  read_field(j, "dump_mesh", c.dump_mesh);
  read_field(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig concentric_preset(double rho, double gamma) {
  ExperimentConfig c;
  c.name = "concentric";
  c.phantom.inclusions.push_back({Disk{{0.0, 0.0}, rho}, gamma});
  c.n1 = 8;
  c.output_dir = "out/concentric";
  return c;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.output_dir = "out/" + name;
  if (name == "figure1") {
    c.phantom.inclusions = {
        {Disk{{-0.4, -0.5}, 0.1}, 3.0},
        {Rectangle{{0.3, -0.65}, {0.45, -0.4}}, 1.0},
        {Ellipse{{0.1, 0.4}, 0.3, 0.1}, 2.0},
    };
    c.delta_rel = 1e-3;
  } else if (name == "figure3") {
    c.phantom.inclusions = {{Disk{{0.0, 0.0}, 0.1}, 3.0}};
    c.delta_rel = 1e-11;
  } else if (name == "concentric") {
    c = concentric_preset();
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected figure1, figure3 or concentric)");
  }
  return c;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  std::filesystem::path dir(config.output_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("EIT_OUTPUT_ROOT"); root && *root) dir = std::filesystem::path(root) / dir;
  }
  return dir;
}

json make_timings(const StageTimings& t) {
  return {{"mesh_s", t.mesh},         {"forward_s", t.forward}, {"noise_s", t.noise},
          {"sensitivities_s", t.sensitivities}, {"bounds_s", t.bounds}, {"solve_s", t.solve}};
}

json make_report(const ExperimentResult& r) {
  json pixels = json::array();
  std::size_t inside = 0, outside = 0, boundary = 0;
  for (const auto& p : r.pixels) {
    pixels.push_back({{"id", p.id},
                      {"x_center", p.center.x()},
                      {"y_center", p.center.y()},
                      {"area", p.area},
                      {"class", to_string(p.pixel_class)},
                      {"beta", p.beta},
                      {"upper", p.upper},
                      {"a_hat", p.a_hat}});
    switch (p.pixel_class) {
      case PixelClass::Inside: ++inside; break;
      case PixelClass::Outside: ++outside; break;
      case PixelClass::Boundary: ++boundary; break;
    }
  }
  const auto& rec = r.reconstruction;
  return {{"config", to_json(r.config)},
          {"basis_size", r.v.entries.rows()},
          {"pixel_count", r.pixels.size()},
          {"class_counts", {{"inside", inside}, {"outside", outside}, {"boundary", boundary}}},
          {"v_norm", r.v.frobenius_norm()},
          {"v_asymmetry", r.v.asymmetry},
          {"delta_abs", r.v_delta.noise_level},
          {"beta_delta", r.bounds.delta_abs},
          {"contrast_bound", r.bounds.contrast_bound},
          {"solver",
           {{"method", r.config.comparison_mode == ComparisonMode::Tikhonov
                           ? "tikhonov"
                           : to_string(r.config.solver)},
            {"comparison_mode", to_string(r.config.comparison_mode)},
            {"objective", rec.objective},
            {"iterations", rec.iterations},
            {"converged", rec.converged},
            {"kkt_residual", rec.kkt_residual}}},
          {"pixels", pixels}};
}

std::string render_pgm(const Eigen::VectorXd& coefficients, const PixelPartition& partition,
                       double a, int canvas) {
  if (static_cast<std::size_t>(coefficients.size()) != partition.size())
    throw DomainError("render: coefficient count differs from pixel count");
  if (!(a > 0.0)) throw DomainError("render: contrast bound must be positive");
  if (canvas < 1) throw DomainError("render: canvas must be positive");
  std::ostringstream os;
  os << "P2\n" << canvas << ' ' << canvas << "\n255\n";
  const double h = 2.0 / canvas;
  for (int row = 0; row < canvas; ++row) {
    int on_line = 0;
    for (int col = 0; col < canvas; ++col) {
      const Point p{-1.0 + (col + 0.5) * h, 1.0 - (row + 0.5) * h};
      int value = 0;
      if (const int id = partition.locate(p); id >= 0) {
        value = static_cast<int>(std::lround(255.0 * std::clamp(coefficients[id] / a, 0.0, 1.0)));
      }
      // keep lines under 70 characters
      if (on_line == 17) {
        os << '\n';
        on_line = 0;
      } else if (on_line > 0) {
        os << ' ';
      }
      os << value;
      ++on_line;
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string render_csv(const Eigen::VectorXd& coefficients, const PixelPartition& partition) {
  std::ostringstream os;
  os << "x_center,y_center,a_hat\n";
  for (const auto& px : partition.pixels) {
    const Point c = px.center();
    os << fmt17(c.x()) << ',' << fmt17(c.y()) << ',' << fmt17(coefficients[px.id]) << '\n';
  }
  return os.str();
}

}  // namespace

void render_image(const Eigen::VectorXd& coefficients, const PixelPartition& partition, double a,
                  const std::filesystem::path& path, int canvas) {
  std::vector<std::filesystem::path> written;
  write_text(path, render_pgm(coefficients, partition, a, canvas), written);
  std::filesystem::path csv = path;
  csv.replace_extension(".csv");
  write_text(csv, render_csv(coefficients, partition), written);
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_artifacts) {
  config.validate();
  ExperimentResult r;
  r.config = config;
  const CurrentBasis basis(config.n1);

  MeshOptions mesh_options;
  mesh_options.angular_scale = config.mesh_angular_scale;
  if (config.mesh_conform) mesh_options.conform_radii = centered_disk_radii(config.phantom);
  const Mesh mesh = stage("mesh", [&] {
    return timed(r.timings.mesh,
                 [&] { return generate_mesh(config.mesh_refinement, config.phantom, mesh_options); });
  });

  r.v = stage("forward", [&] { return timed(r.timings.forward, [&] { return assemble_V(mesh, basis); }); });
  r.v_delta = stage("noise", [&] {
    return timed(r.timings.noise, [&] { return add_noise(r.v, config.delta_rel, config.seed); });
  });

  r.partition = stage("partition", [&] {
    PartitionOptions po;
    po.quadrature_subdivisions = config.quadrature_subdivisions;
    return build_partition(config.partition_resolution, po);
  });
  r.sensitivities = stage("sensitivities", [&] {
    return timed(r.timings.sensitivities, [&] { return assemble_all_Sk(r.partition, basis); });
  });
  r.classes.reserve(r.partition.size());
  for (const auto& px : r.partition.pixels)
    r.classes.push_back(classify_pixel(px, config.phantom, config.classify_samples));

  const double gamma_min = config.gamma_min.value_or(config.phantom.min_contrast().value_or(1.0));
  const double a = stage("bounds", [&] { return contrast_bound(gamma_min); });
  const double beta_delta = config.beta_delta_abs.value_or(r.v_delta.noise_level);
  r.bounds = stage("bounds", [&] {
    return timed(r.timings.bounds,
                 [&] { return compute_bounds(r.sensitivities, r.v_delta, beta_delta, a); });
  });

  ReconstructionProblem problem;
  problem.target = r.v_delta.entries;
  problem.sensitivities.reserve(r.sensitivities.size());
  for (const auto& s : r.sensitivities) problem.sensitivities.push_back(s.entries);
  const auto p = static_cast<Eigen::Index>(r.sensitivities.size());
  r.solve_upper.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    switch (config.comparison_mode) {
      case ComparisonMode::NoBeta: r.solve_upper[k] = a; break;
      case ComparisonMode::NoA: r.solve_upper[k] = r.bounds.beta[k]; break;
      default: r.solve_upper[k] = r.bounds.effective_upper[k]; break;
    }
  }
  problem.upper = r.solve_upper;
  SolveOptions so;
  so.tol = config.tol;
  so.max_iter = config.max_iter;
  r.reconstruction = stage("solve", [&] {
    return timed(r.timings.solve, [&] {
      if (config.comparison_mode == ComparisonMode::Tikhonov)
        return solve_tikhonov(problem, config.tikhonov_lambda);
      return config.solver == SolverKind::Spectral ? solve_spectral(problem, so)
                                                   : solve_box_ls(problem, so);
    });
  });

  r.pixels.reserve(r.partition.size());
  for (const auto& px : r.partition.pixels) {
    const auto k = static_cast<std::size_t>(px.id);
    r.pixels.push_back({px.id, px.center(), px.area, r.classes[k], r.bounds.beta[k],
                        r.solve_upper[px.id], r.reconstruction.coefficients[px.id]});
  }

  if (!write_artifacts) return r;

  const std::filesystem::path dir = resolve_output_dir(config);
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", make_report(r).dump(2) + "\n", written);
    write_text(dir / "timings.json", make_timings(r.timings).dump(2) + "\n", written);
    {
      std::ostringstream os;
      write_matrix(os, r.v.entries);
      write_text(dir / "V.txt", os.str(), written);
    }
    {
      std::ostringstream os;
      write_matrix(os, r.v_delta.entries);
      write_text(dir / "V_delta.txt", os.str(), written);
    }
    {
      std::ostringstream os;
      os << "pixel_id,beta,effective_upper,class\n";
      for (const auto& px : r.pixels)
        os << px.id << ',' << fmt17(px.beta) << ',' << fmt17(r.bounds.effective_upper[px.id])
           << ',' << to_string(px.pixel_class) << '\n';
      write_text(dir / "bounds.csv", os.str(), written);
    }
    {
      std::ostringstream os;
      os << "pixel_id,a_hat\n";
      for (const auto& px : r.pixels) os << px.id << ',' << fmt17(px.a_hat) << '\n';
      write_text(dir / "result.csv", os.str(), written);
    }
    write_text(dir / "reconstruction.pgm",
               render_pgm(r.reconstruction.coefficients, r.partition, a, config.canvas), written);
    write_text(dir / "reconstruction.csv", render_csv(r.reconstruction.coefficients, r.partition),
               written);
    if (config.dump_mesh) {
      std::ostringstream os;
      write_mesh(os, mesh);
      write_text(dir / "mesh.txt", os.str(), written);
    }
    if (config.dump_sensitivities) {
      std::filesystem::create_directories(dir / "S");
      for (const auto& s : r.sensitivities) {
        std::ostringstream os;
        write_matrix(os, s.entries);
        write_text(dir / "S" / ("S_" + std::to_string(s.pixel_id) + ".txt"), os.str(), written);
      }
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& f : written) std::filesystem::remove(f, ec);
    throw;
  }
  r.artifacts = std::move(written);
  return r;
}

OracleReport oracle_check(const ExperimentConfig& config) {
  config.validate();
  if (config.phantom.inclusions.size() != 1)
    throw ConfigError("oracle-check: phantom must be a single disk centred at the origin");
  const auto* disk = std::get_if<Disk>(&config.phantom.inclusions.front().shape);
  if (!disk || disk->center.norm() != 0.0)
    throw ConfigError("oracle-check: phantom must be a single disk centred at the origin");
  const double sigma1 = 1.0 + config.phantom.inclusions.front().contrast;

  MeshOptions mo;
  mo.angular_scale = config.mesh_angular_scale;
  if (config.mesh_conform) mo.conform_radii = {disk->radius};
  const Mesh mesh = generate_mesh(config.mesh_refinement, config.phantom, mo);
  const CurrentBasis basis(config.n1);
  const MeasurementMatrix v = assemble_V(mesh, basis);

  OracleReport out;
  out.v_norm = v.frobenius_norm();
  double err2 = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    const auto [j, kind] = basis.ordering[k];
    const double exact = 1.0 / j - analytic_concentric(disk->radius, sigma1, j);
    const double fem = v.entries(k, k);
    out.entries.push_back({j, kind, fem, exact, std::abs(fem - exact) / std::abs(exact)});
    out.max_relative_error = std::max(out.max_relative_error, out.entries.back().relative_error);
    err2 += (fem - exact) * (fem - exact);
    for (int l = 0; l < basis.size(); ++l)
      if (l != k) out.max_offdiagonal = std::max(out.max_offdiagonal, std::abs(v.entries(k, l)));
  }
  out.diagonal_error_norm = std::sqrt(err2);
  return out;
}

json to_json(const OracleReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"j", e.j},
                       {"kind", to_string(e.kind)},
                       {"fem", e.fem},
                       {"analytic", e.analytic},
                       {"relative_error", e.relative_error}});
  return {{"entries", entries},
          {"max_relative_error", r.max_relative_error},
          {"max_offdiagonal", r.max_offdiagonal},
          {"v_norm", r.v_norm},
          {"diagonal_error_norm", r.diagonal_error_norm}};
}

}  // namespace eit
