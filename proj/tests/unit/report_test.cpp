#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgvf/report.hpp"
#include "test_support.hpp"

using namespace cgvf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("cgvf_report_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::size_t columns(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

}  // namespace

TEST(Report, CsvRowsMatchHeader) {
  for (const Scenario& sc : {test::three_circles(), test::two_aircraft()}) {
    const fs::path dir = scratch("csv");
    {
      CsvWriter w(dir / "t.csv", sc);
      RunOptions opts;
      opts.on_record = [&](const TraceRecord& r) { w.write(r); };
      run(sc, opts);
    }
    std::ifstream in(dir / "t.csv");
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(columns(header), csv_header(sc).size());
    long rows = 0;
    while (std::getline(in, line)) {
      EXPECT_EQ(columns(line), csv_header(sc).size());
      ++rows;
    }
    EXPECT_EQ(rows, sc.n_steps() + 1);
  }
}

TEST(Report, DubinsHeaderCarriesTelemetry) {
  const auto h = csv_header(test::two_aircraft());
  EXPECT_EQ(h.front(), "t");
  EXPECT_NE(std::find(h.begin(), h.end(), "theta1"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "sigma0"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "e0_1"), h.end());
  EXPECT_EQ(h.back(), "min_dist");
}

TEST(Report, ZeroErrorTraceSummarizesToZero) {
  const Scenario sc = test::three_circles();
  Trace t;
  for (int k = 0; k < 5; ++k) {
    TraceRecord r;
    r.t = 0.1 * k;
    r.state = Eigen::VectorXd::Zero(9);
    r.phi_norm = Eigen::VectorXd::Zero(3);
    r.edge_error = Eigen::VectorXd::Zero(3);
    r.min_distance = 1.0;
    t.records.push_back(r);
  }
  const RunSummary s = summarize(sc, t);
  EXPECT_EQ(s.peak_phi, 0.0);
  EXPECT_EQ(s.peak_coordination, 0.0);
  EXPECT_EQ(s.final_phi, 0.0);
  EXPECT_EQ(s.final_coordination, 0.0);
  EXPECT_EQ(s.status, "ok");
  ASSERT_TRUE(s.time_to_tolerance);
  EXPECT_EQ(*s.time_to_tolerance, 0.0);
}

TEST(Report, ConvergedRunReachesToleranceBeforeEnd) {
  Scenario sc = test::three_circles(2.0);
  sc.t_end = 20.0;
  const RunSummary s = summarize(sc, run(sc));
  EXPECT_TRUE(s.tolerances_met);
  ASSERT_TRUE(s.time_to_tolerance);
  EXPECT_LT(*s.time_to_tolerance, sc.t_end);
  EXPECT_GT(s.peak_phi, s.final_phi);
}

TEST(Report, AbortedSummary) {
  const Scenario sc = test::three_circles();
  const RunSummary s = summarize(sc, run(sc), "diverged: test");
  EXPECT_EQ(s.status, "aborted");
  EXPECT_FALSE(s.tolerances_met);
  EXPECT_EQ(to_json(s)["reason"], "diverged: test");
}

TEST(Report, PlotsAreDeterministic) {
  const Scenario sc = test::two_aircraft();
  const Trace t = run(sc);
  const auto a = write_plots(sc, t, scratch("plots_a"));
  const auto b = write_plots(sc, t, scratch("plots_b"));
  ASSERT_EQ(a.size(), 6u);  // three projections, phi, coordination, sigma
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(slurp(a[k]), slurp(b[k]));
}

TEST(Report, SingleRecordTraceGivesValidSvg) {
  Scenario sc = test::three_circles();
  Trace t = run(sc);
  t.records.resize(1);
  const auto files = write_plots(sc, t, scratch("single"));
  ASSERT_EQ(files.size(), 3u);  // planar: one projection + two error plots
  for (const auto& f : files) {
    const std::string svg = slurp(f);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
  }
}
