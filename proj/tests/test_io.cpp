#include "diracpack/io.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace diracpack;

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(NAN), "nan");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng)) % 50);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

namespace {

FieldMap tiny_map() {
  FieldMap m;
  m.grid = {0.0, 1.0, -1.0, 1.0, 3, 3};
  m.t = 2.5;
  m.observable = ObservableId::RhoE;
  m.values = {1, -2, 3, 4, 0.5, -0.25, 7, 8, 9};
  m.flags = {0, 0, 0, 0, 1, 0, 0, 0, 0};
  return m;
}

} // namespace

TEST(FieldCsv, HeaderAndRows) {
  std::ostringstream os;
  write_field_csv(os, tiny_map(), {1.0, 0.1, 7.0, 2.5, SpectralMeasure::Line});
  const std::string s = os.str();
  std::istringstream is(s);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# observable=rhoE m=1 l=0.1 q=7 t=2.5 measure=line", 0), 0u);
  EXPECT_NE(line.find("units="), std::string::npos);
  std::getline(is, line);
  EXPECT_EQ(line, "x,z,value,flag");
  std::getline(is, line);
  EXPECT_EQ(line, "0,-1,1,0");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 9);
  EXPECT_EQ(s.find('\r'), std::string::npos);
  EXPECT_NE(s.find("\n0.5,0,0.5,1\n"), std::string::npos);
}

TEST(FieldJson, StableKeys) {
  QuadratureRule q;
  q.p_max = 66.0;
  const auto j = field_json(tiny_map(), {1.0, 0.1, std::nullopt, 2.5}, q);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"observable", "params", "quadrature", "grid",
                                            "noise_floor", "field_scale", "points"}));
  EXPECT_TRUE(j["params"]["q"].is_null());
  EXPECT_EQ(j["points"].size(), 9u);
  EXPECT_EQ(j.dump(), field_json(tiny_map(), {1.0, 0.1, std::nullopt, 2.5}, q).dump());
}

TEST(ContoursCsv, Layout) {
  std::ostringstream os;
  write_contours_csv(os, {Polyline{{{0.5, 1.0}, {0.75, 1.25}}, false}});
  EXPECT_EQ(os.str(), "contour_id,vertex_index,x,z\n0,0,0.5,1\n0,1,0.75,1.25\n");
}

TEST(MomentsOutput, FitAndNotice) {
  MomentTable tab;
  tab.info = {0.0, 0.1, std::nullopt, 0.0, SpectralMeasure::Volume};
  tab.samples = {{0.0, 0.0366}};
  tab.notice = "fit skipped";
  std::ostringstream os;
  write_moments_csv(os, tab);
  EXPECT_NE(os.str().find("notice=fit skipped"), std::string::npos);
  EXPECT_NE(os.str().find("t,r2,r2_over_l2\n"), std::string::npos);
  const auto j = moments_json(tab);
  EXPECT_TRUE(j["fit"].is_null());
  EXPECT_NEAR(j["samples"][0]["r2_over_l2"].get<double>(), 3.66, 1e-12);
}

TEST(CheckReportJson, StatusFollowsMembers) {
  CheckReport rep;
  rep.checks.push_back({"a", true, 1.0, 2.0, 0.1, ""});
  EXPECT_TRUE(check_report_json(rep)["passed"].get<bool>());
  rep.checks.push_back({"b", false, 3.0, 2.0, 0.1, "too big"});
  const auto j = check_report_json(rep);
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["checks"][1]["status"], "fail");
  std::vector<std::string> keys;
  for (auto it = j["checks"][0].begin(); it != j["checks"][0].end(); ++it)
    keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"name", "status", "value", "tolerance",
                                            "runtime_s", "detail"}));
  EXPECT_FALSE(CheckReport{}.passed());
}
