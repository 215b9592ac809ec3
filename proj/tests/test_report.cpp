#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "siccompound/report.hpp"

using namespace siccompound;

TEST(Report, Round12) {
  EXPECT_EQ(round12(0.1 + 0.2), 0.3);
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_FALSE(std::signbit(round12(-0.0)));
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Report, Schema) {
  Report r("demo");
  r.tolerance("derived", 1e-9);
  r.check("first", true);
  r.check("second", false, "why");
  r.result()["value"] = num(2.0 / 3.0);
  const Json j = r.to_json();
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["command"], "demo");
  EXPECT_FALSE(j["ok"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 2u);
  EXPECT_EQ(j["checks"][1]["detail"], "why");
  EXPECT_FALSE(j["checks"][0].contains("detail"));
  EXPECT_EQ(j["result"]["value"].get<double>(), 0.666666666667);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "command", "tolerances", "ok",
                                            "checks", "result"}));
}

TEST(Report, EmptyReportIsOk) {
  const Json j = Report("empty").to_json();
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_TRUE(j["tolerances"].is_object());
  EXPECT_TRUE(j["result"].is_object());
}

TEST(Report, DeterministicCompoundExport) {
  const auto c = build_compound();
  const auto a = compound_export_json(c, verify_compound(c)).dump();
  const auto b = compound_export_json(build_compound(), verify_compound(build_compound())).dump();
  EXPECT_EQ(a, b);
}

TEST(Report, LatinJsonShape) {
  const auto l = latin_square(build_compound());
  const Json j = latin_json(l);
  ASSERT_EQ(j["rows_bottom_to_top"].size(), 4u);
  EXPECT_EQ(j["rows_bottom_to_top"][0]["coset"], "I");
  EXPECT_EQ(j["rows_bottom_to_top"][0]["labels"], Json({4, 3, 2, 1}));
  EXPECT_EQ(j["extra_bases"].size(), 16u);
  EXPECT_EQ(j["extra_sics"].size(), 4u);
}
