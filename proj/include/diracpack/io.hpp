#pragma once

// CSV / JSON serialization of maps, contours, regions and moment tables.
// Floats use the shortest round-trip representation, so identical inputs
// produce byte-identical files.

#include "diracpack/checks.hpp"
#include "diracpack/format.hpp"
#include "diracpack/contours.hpp"
#include "diracpack/grid_scan.hpp"
#include "diracpack/moments.hpp"
#include "diracpack/quadrature.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace diracpack {

using json = nlohmann::ordered_json;

/// JSON number, or a string for non-finite values (JSON has no inf/nan).
inline json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

struct RunInfo {
  double m = 1.0;
  double l = 0.1;
  std::optional<double> q;
  double t = 0.0;
  SpectralMeasure measure = SpectralMeasure::Line;
};

inline RunInfo run_info(const MomentumProfile &profile, double t) {
  return {profile.m(), profile.l(), profile.q(), t, profile.measure()};
}

inline std::string describe(const RunInfo &info) {
  std::string s = "m=" + format_double(info.m) + " l=" + format_double(info.l) +
                  " q=" + (info.q ? format_double(*info.q) : std::string("none")) +
                  " t=" + format_double(info.t) +
                  " measure=" + to_string(info.measure);
  return s;
}

inline json params_json(const RunInfo &info) {
  json j;
  j["m"] = info.m;
  j["l"] = info.l;
  j["q"] = info.q ? json(*info.q) : json(nullptr);
  j["t"] = info.t;
  j["measure"] = to_string(info.measure);
  j["units"] = "hbar=c=1; length hbar/mc; time hbar/mc^2";
  return j;
}

inline json quadrature_json(const QuadratureRule &q) {
  json j;
  j["p_max"] = q.p_max;
  j["n_nodes"] = q.n_nodes;
  j["est_error"] = q.est_error;
  j["t_max"] = q.t_max;
  j["r_max"] = q.r_max;
  return j;
}

/// Header comment, column line, then one row per grid point in index order.
inline void write_field_csv(std::ostream &os, const FieldMap &map,
                            const RunInfo &info) {
  os << "# observable=" << to_string(map.observable) << ' ' << describe(info)
     << " units=natural(hbar=c=1;length=hbar/mc)\n";
  os << "x,z,value,flag\n";
  const auto &g = map.grid;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nz; ++j) {
      const std::size_t idx = g.index(i, j);
      os << format_double(g.x(i)) << ',' << format_double(g.z(j)) << ','
         << format_double(map.values[idx]) << ','
         << static_cast<int>(map.flags[idx]) << '\n';
    }
}

inline json field_json(const FieldMap &map, const RunInfo &info,
                       const QuadratureRule &quad) {
  json j;
  j["observable"] = std::string(to_string(map.observable));
  j["params"] = params_json(info);
  j["quadrature"] = quadrature_json(quad);
  const auto &g = map.grid;
  j["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"z_min", g.z_min},
               {"z_max", g.z_max}, {"nx", g.nx},       {"nz", g.nz}};
  j["noise_floor"] = map.noise_floor;
  j["field_scale"] = map.field_scale;
  json pts = json::array();
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j2 = 0; j2 < g.nz; ++j2) {
      const std::size_t idx = g.index(i, j2);
      pts.push_back({{"x", g.x(i)},
                     {"z", g.z(j2)},
                     {"value", map.values[idx]},
                     {"flag", static_cast<int>(map.flags[idx])}});
    }
  j["points"] = std::move(pts);
  return j;
}

inline void write_contours_csv(std::ostream &os,
                               const std::vector<Polyline> &lines) {
  os << "contour_id,vertex_index,x,z\n";
  for (std::size_t c = 0; c < lines.size(); ++c)
    for (std::size_t v = 0; v < lines[c].points.size(); ++v)
      os << c << ',' << v << ',' << format_double(lines[c].points[v].x) << ','
         << format_double(lines[c].points[v].z) << '\n';
}

inline json regions_json(const std::vector<NegativeRegion> &regions,
                         const std::vector<Polyline> &contours,
                         const RunInfo &info, double floor) {
  json j;
  j["params"] = params_json(info);
  j["noise_floor"] = floor;
  j["contour_count"] = contours.size();
  j["region_count"] = regions.size();
  json arr = json::array();
  for (const auto &r : regions)
    arr.push_back({{"cells", r.cells.size()},
                   {"min_value", r.min_value},
                   {"centroid", {{"x", r.centroid.x}, {"z", r.centroid.z}}}});
  j["regions"] = std::move(arr);
  return j;
}

/// Moment table; `fit` is absent when the schedule cannot determine A, B.
struct MomentTable {
  RunInfo info;
  std::vector<MomentSample> samples;
  std::optional<MomentFit> fit;
  std::string notice;
};

inline void write_moments_csv(std::ostream &os, const MomentTable &tab) {
  os << "# moments " << describe(tab.info);
  if (tab.fit)
    os << " A=" << format_double(tab.fit->A) << " B=" << format_double(tab.fit->B)
       << " residual=" << format_double(tab.fit->residual);
  if (!tab.notice.empty()) os << " notice=" << tab.notice;
  os << '\n';
  const bool massless = tab.info.m == 0.0;
  os << (massless ? "t,r2,r2_over_l2\n" : "t,r2\n");
  for (const auto &s : tab.samples) {
    os << format_double(s.t) << ',' << format_double(s.r2);
    if (massless) os << ',' << format_double(s.r2 / (tab.info.l * tab.info.l));
    os << '\n';
  }
}

inline json moments_json(const MomentTable &tab) {
  json j;
  j["params"] = params_json(tab.info);
  json rows = json::array();
  for (const auto &s : tab.samples) {
    json row{{"t", s.t}, {"r2", json_number(s.r2)}};
    if (tab.info.m == 0.0)
      row["r2_over_l2"] = json_number(s.r2 / (tab.info.l * tab.info.l));
    rows.push_back(std::move(row));
  }
  j["samples"] = std::move(rows);
  if (tab.fit)
    j["fit"] = {{"A", tab.fit->A}, {"B", tab.fit->B}, {"residual", tab.fit->residual}};
  else
    j["fit"] = nullptr;
  if (!tab.notice.empty()) j["notice"] = tab.notice;
  return j;
}

inline json check_report_json(const CheckReport &rep) {
  json j;
  j["passed"] = rep.passed();
  json arr = json::array();
  for (const auto &c : rep.checks)
    arr.push_back({{"name", c.name},
                   {"status", c.passed ? "pass" : "fail"},
                   {"value", json_number(c.value)},
                   {"tolerance", json_number(c.tolerance)},
                   {"runtime_s", c.runtime_s},
                   {"detail", c.detail}});
  j["checks"] = std::move(arr);
  return j;
}

inline void write_check_report(std::ostream &os, const CheckReport &rep) {
  for (const auto &c : rep.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
       << " tol=" << format_double(c.tolerance) << " time=" << format_double(c.runtime_s)
       << "s";
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  os << (rep.passed() ? "all checks passed\n" : "some checks FAILED\n");
}

} // namespace diracpack
