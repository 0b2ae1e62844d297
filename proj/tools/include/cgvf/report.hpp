#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgvf/sim.hpp"

namespace cgvf {

/// Column names: t, per-robot state, per-robot |phi|, per-edge w_i - w_j - delta_ij,
/// Dubins extras (sigma, u_theta, saturation flag) and the minimum pairwise distance.
std::vector<std::string> csv_header(const Scenario& sc);

/// Streams trace rows to disk as they are recorded; values printed with %.17g.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const Scenario& sc);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write(const TraceRecord& r);
  void flush();

 private:
  std::FILE* f_ = nullptr;
};

struct RunSummary {
  std::string scenario;
  std::string mode;
  std::string status = "ok";  // ok | tolerance_unmet | aborted
  std::string reason;
  double t_final = 0.0;
  long records = 0;
  double final_phi = 0.0;  // max over robots of |phi_i| at the last record
  double peak_phi = 0.0;
  double final_coordination = 0.0;  // max over edges of |w_i - w_j - delta_ij|
  double peak_coordination = 0.0;
  std::optional<double> time_to_tolerance;  // last entry into the tolerance band
  std::optional<double> min_distance;
  std::vector<double> saturation_duty;  // Dubins: fraction of records saturated
  long condition_violations = 0;
  bool tolerances_met = false;
};

/// Statistics of a (possibly partial) trace against sc.tolerances. An empty
/// `abort_reason` means the run reached t_end.
RunSummary summarize(const Scenario& sc, const Trace& trace, const std::string& abort_reason = {});
nlohmann::json to_json(const RunSummary& s);

/// Deterministic SVG plots into `dir`; returns the files written.
std::vector<std::filesystem::path> write_plots(const Scenario& sc, const Trace& trace,
                                               const std::filesystem::path& dir);

}  // namespace cgvf
