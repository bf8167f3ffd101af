// diracpack: field maps, zero contours, moment tables and the check suite.
//
// Exit codes: 0 success, 1 check failure, 2 configuration error,
// 3 numerical or I/O failure.

#include "diracpack/checks.hpp"
#include "diracpack/contours.hpp"
#include "diracpack/grid_scan.hpp"
#include "diracpack/io.hpp"
#include "diracpack/moments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace diracpack;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double m = 1.0;
  double l = 0.1;
  std::optional<double> q;
  double t = 2.5;
  HalfPlaneGrid grid{};
  double rel_tol = 1e-10;
  std::string measure = "line";
  std::string moments_measure = "volume";
  std::string output = "-";
  std::string format = "csv";
  std::string observable = "rhoE";
  std::string contours_path;
  std::string regions_path;
  std::string t_list = "0,0.5,1,1.5,2,2.5";
  bool json_report = false;
  bool inject_fault = false;
};

SpectralMeasure parse_measure(const std::string &s) {
  if (s == "line") return SpectralMeasure::Line;
  if (s == "volume") return SpectralMeasure::Volume;
  throw ConfigError("unknown measure '" + s + "' (expected line or volume)");
}

std::vector<double> parse_t_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw ConfigError("bad --t-list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--t-list is empty");
  return out;
}

// Stream for `path`, or stdout for "-".
class Sink {
public:
  explicit Sink(const std::string &path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
    path_ = path;
  }
  std::ostream &os() { return file_ ? *file_ : std::cout; }
  void finish() {
    os().flush();
    if (!os()) throw std::runtime_error("write failed for '" + path_ + "'");
  }

private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_ = "<stdout>";
};

MomentumProfile profile_of(const RunConfig &cfg) {
  try {
    return make_profile(PhysParams(cfg.m, cfg.l), cfg.q, parse_measure(cfg.measure));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

void validate_grid(const HalfPlaneGrid &g) {
  try {
    g.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

FieldMap field_map(const RunConfig &cfg, const MomentumProfile &profile,
                   QuadratureRule &quad_out) {
  validate_grid(cfg.grid);
  ObservableId id;
  try {
    id = parse_observable(cfg.observable);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  quad_out = build_quadrature(profile, cfg.t, cfg.grid.r_max(), cfg.rel_tol);
  return scan(cfg.grid, cfg.t, id, profile, quad_out);
}

int cmd_field(const RunConfig &cfg) {
  const auto profile = profile_of(cfg);
  Sink out(cfg.output);
  QuadratureRule quad;
  const FieldMap map = field_map(cfg, profile, quad);
  if (cfg.format == "json")
    out.os() << field_json(map, run_info(profile, cfg.t), quad).dump(1) << '\n';
  else
    write_field_csv(out.os(), map, run_info(profile, cfg.t));
  out.finish();
  return kOk;
}

int cmd_contour(const RunConfig &cfg) {
  const auto profile = profile_of(cfg);
  std::optional<Sink> c;
  if (!cfg.contours_path.empty()) c.emplace(cfg.contours_path);
  Sink r(cfg.regions_path.empty() ? cfg.output : cfg.regions_path);
  QuadratureRule quad;
  const FieldMap map = field_map(cfg, profile, quad);
  const auto lines = zero_contours(map, map.noise_floor);
  const auto regions = negative_components(map, map.noise_floor);
  if (c) {
    write_contours_csv(c->os(), lines);
    c->finish();
  }
  r.os() << regions_json(regions, lines, run_info(profile, cfg.t), map.noise_floor)
                .dump(1)
         << '\n';
  r.finish();
  return kOk;
}

int cmd_moments(RunConfig cfg) {
  cfg.measure = cfg.moments_measure;
  if (parse_measure(cfg.measure) == SpectralMeasure::Line)
    throw ConfigError("moments diverge for the line measure; use --measure volume");
  const auto profile = profile_of(cfg);
  const auto ts = parse_t_list(cfg.t_list);
  double t_max = 0.0;
  for (double t : ts) t_max = std::max(t_max, std::abs(t));
  Sink out(cfg.output);
  const auto quad = moment_quadrature(profile, t_max, cfg.rel_tol);

  MomentTable tab;
  tab.info = run_info(profile, 0.0);
  for (double t : ts) tab.samples.push_back({t, mean_square_radius(t, profile, quad)});
  try {
    tab.fit = quadratic_fit(tab.samples);
  } catch (const DegenerateInput &) {
    tab.notice = "fit skipped: fewer than 3 distinct t values";
    std::cerr << "diracpack: " << tab.notice << '\n';
  }
  if (cfg.format == "json")
    out.os() << moments_json(tab).dump(1) << '\n';
  else
    write_moments_csv(out.os(), tab);
  out.finish();
  return kOk;
}

int cmd_check(const RunConfig &cfg) {
  validate_grid(cfg.grid);
  CheckConfig cc;
  cc.m = cfg.m;
  cc.l = cfg.l;
  cc.t = cfg.t;
  cc.q = cfg.q.value_or(7.0);
  cc.grid = cfg.grid;
  cc.rel_tol = cfg.rel_tol;
  cc.inject_fault = cfg.inject_fault;
  if (!(cc.m > 0.0)) throw ConfigError("check requires --mass > 0");
  if (!(cc.l > 0.0)) throw ConfigError("check requires --l > 0");
  Sink out(cfg.output);
  const CheckReport rep = run_checks(cc);
  if (cfg.json_report)
    out.os() << check_report_json(rep).dump(1) << '\n';
  else
    write_check_report(out.os(), rep);
  out.finish();
  return rep.passed() ? kOk : kCheckFailed;
}

void add_physics(CLI::App *sub, RunConfig &cfg) {
  sub->add_option("--mass", cfg.m, "particle mass (natural units)")->capture_default_str();
  sub->add_option("--l", cfg.l, "packet scale l in f(p)=exp(-l^2 p^2)")->capture_default_str();
  sub->add_option("--q", cfg.q, "enable the (p^2 - q^2 m^2) prefactor");
  sub->add_option("--t", cfg.t, "time")->capture_default_str();
  sub->add_option("--rel-tol", cfg.rel_tol, "momentum quadrature tolerance")
      ->capture_default_str();
  sub->add_option("--output,-o", cfg.output, "output file, - for stdout")
      ->capture_default_str();
}

void add_grid(CLI::App *sub, RunConfig &cfg) {
  sub->add_option("--x-min", cfg.grid.x_min)->capture_default_str();
  sub->add_option("--x-max", cfg.grid.x_max)->capture_default_str();
  sub->add_option("--z-min", cfg.grid.z_min)->capture_default_str();
  sub->add_option("--z-max", cfg.grid.z_max)->capture_default_str();
  sub->add_option("--nx", cfg.grid.nx)->capture_default_str();
  sub->add_option("--nz", cfg.grid.nz)->capture_default_str();
  sub->add_option("--observable", cfg.observable, "rhoE, rho, speed, speedD or G")
      ->capture_default_str();
  sub->add_option("--measure", cfg.measure, "spectral measure: line or volume")
      ->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Dirac wave packet fields, energy quasi-density maps and checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto *field = app.add_subcommand("field", "write an observable map (CSV or JSON)");
  add_physics(field, cfg);
  add_grid(field, cfg);
  field->add_option("--format", cfg.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto *contour = app.add_subcommand("contour", "zero contours and negative regions");
  add_physics(contour, cfg);
  add_grid(contour, cfg);
  contour->add_option("--contours", cfg.contours_path, "contour polylines CSV");
  contour->add_option("--regions", cfg.regions_path,
                      "region summary JSON (default: --output)");

  auto *moments = app.add_subcommand("moments", "<r^2>(t) table and quadratic fit");
  add_physics(moments, cfg);
  moments->add_option("--t-list", cfg.t_list, "comma-separated times")
      ->capture_default_str();
  moments->add_option("--measure", cfg.moments_measure, "spectral measure")
      ->capture_default_str();
  moments->add_option("--format", cfg.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto *check = app.add_subcommand("check", "run the verification suite");
  add_physics(check, cfg);
  add_grid(check, cfg);
  check->add_flag("--json", cfg.json_report, "JSON report");
  check->add_flag("--inject-fault", cfg.inject_fault,
                  "corrupt c1 before the Dirac residual check (test hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*field) return cmd_field(cfg);
    if (*contour) return cmd_contour(cfg);
    if (*moments) return cmd_moments(cfg);
    if (*check) return cmd_check(cfg);
  } catch (const ConfigError &e) {
    std::cerr << "diracpack: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const EnvelopeError &e) {
    std::cerr << "diracpack: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument &e) {
    std::cerr << "diracpack: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "diracpack: error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
