#include "cgvf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "cgvf/error.hpp"

namespace cgvf {

std::vector<std::string> csv_header(const Scenario& sc) {
  std::vector<std::string> h{"t"};
  const int N = sc.n_robots();
  const int n = sc.dim();
  static const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < N; ++i) {
    const std::string id = std::to_string(i);
    if (sc.mode == Mode::kDubins) {
      for (int j = 0; j < 3; ++j) h.push_back(std::string(axes[j]) + id);
      h.push_back("theta" + id);
    } else {
      for (int j = 0; j < n; ++j) h.push_back("x" + id + "_" + std::to_string(j));
    }
    h.push_back("w" + id);
  }
  for (int i = 0; i < N; ++i) h.push_back("phi" + std::to_string(i));
  for (auto [i, j] : sc.graph.edges()) h.push_back("e" + std::to_string(i) + "_" + std::to_string(j));
  if (sc.mode == Mode::kDubins) {
    for (int i = 0; i < N; ++i) h.push_back("sigma" + std::to_string(i));
    for (int i = 0; i < N; ++i) h.push_back("u_theta" + std::to_string(i));
    for (int i = 0; i < N; ++i) h.push_back("sat" + std::to_string(i));
  }
  h.push_back("min_dist");
  return h;
}

CsvWriter::CsvWriter(const std::filesystem::path& file, const Scenario& sc) {
  f_ = std::fopen(file.string().c_str(), "w");
  if (!f_) throw Error("cannot write " + file.string());
  const auto h = csv_header(sc);
  for (std::size_t k = 0; k < h.size(); ++k) std::fprintf(f_, k ? ",%s" : "%s", h[k].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::flush() { std::fflush(f_); }

void CsvWriter::write(const TraceRecord& r) {
  std::fprintf(f_, "%.17g", r.t);
  auto put = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) std::fprintf(f_, ",%.17g", v[k]);
  };
  put(r.state);
  put(r.phi_norm);
  put(r.edge_error);
  put(r.sigma);
  put(r.u_theta);
  for (auto s : r.saturated) std::fprintf(f_, ",%d", static_cast<int>(s));
  std::fprintf(f_, ",%.17g\n", r.min_distance);
}

RunSummary summarize(const Scenario& sc, const Trace& trace, const std::string& abort_reason) {
  RunSummary s;
  s.scenario = sc.name;
  s.mode = to_string(sc.mode);
  s.records = static_cast<long>(trace.records.size());
  const int N = sc.n_robots();
  if (sc.mode == Mode::kDubins) s.saturation_duty.assign(N, 0.0);
  std::optional<double> entered;
  for (const auto& r : trace.records) {
    const double phi = r.phi_norm.size() ? r.phi_norm.maxCoeff() : 0.0;
    const double coord = r.edge_error.size() ? r.edge_error.cwiseAbs().maxCoeff() : 0.0;
    s.peak_phi = std::max(s.peak_phi, phi);
    s.peak_coordination = std::max(s.peak_coordination, coord);
    s.final_phi = phi;
    s.final_coordination = coord;
    s.t_final = r.t;
    const bool inside = phi <= sc.tolerances.phi && coord <= sc.tolerances.coordination;
    if (!inside) entered.reset();
    else if (!entered) entered = r.t;
    if (N > 1) s.min_distance = std::min(s.min_distance.value_or(r.min_distance), r.min_distance);
    for (std::size_t i = 0; i < r.saturated.size(); ++i) s.saturation_duty[i] += r.saturated[i];
    for (auto c : r.condition_violated) s.condition_violations += c;
  }
  if (s.records)
    for (auto& d : s.saturation_duty) d /= static_cast<double>(s.records);
  s.time_to_tolerance = entered;
  s.tolerances_met = abort_reason.empty() && s.records > 0 && s.final_phi <= sc.tolerances.phi &&
                     s.final_coordination <= sc.tolerances.coordination;
  if (sc.tolerances.min_distance && s.min_distance && *s.min_distance < *sc.tolerances.min_distance)
    s.tolerances_met = false;
  if (!abort_reason.empty()) {
    s.status = "aborted";
    s.reason = abort_reason;
  } else if (!s.tolerances_met) {
    s.status = "tolerance_unmet";
  }
  return s;
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json j = {{"scenario", s.scenario},
                      {"mode", s.mode},
                      {"status", s.status},
                      {"t_final", s.t_final},
                      {"records", s.records},
                      {"final_phi", s.final_phi},
                      {"peak_phi", s.peak_phi},
                      {"final_coordination", s.final_coordination},
                      {"peak_coordination", s.peak_coordination},
                      {"tolerances_met", s.tolerances_met},
                      {"condition_violations", s.condition_violations}};
  if (!s.reason.empty()) j["reason"] = s.reason;
  j["time_to_tolerance"] = s.time_to_tolerance ? nlohmann::json(*s.time_to_tolerance) : nullptr;
  j["min_distance"] = s.min_distance ? nlohmann::json(*s.min_distance) : nullptr;
  if (!s.saturation_duty.empty()) j["saturation_duty"] = s.saturation_duty;
  return j;
}

// ---------------------------------------------------------------------------
// SVG plots

namespace {

constexpr std::size_t kMaxPoints = 2000;
constexpr double kW = 640, kH = 480, kMargin = 60;

const char* palette(int i) {
  static const char* c[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return c[i % 10];
}

struct Series {
  std::vector<double> x, y;
  std::string color;
  double width = 1.2;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

class Chart {
 public:
  Chart(std::string title, std::string xlabel, std::string ylabel, bool equal_aspect = false)
      : title_(std::move(title)), xl_(std::move(xlabel)), yl_(std::move(ylabel)), equal_(equal_aspect) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void marker(double x, double y, const std::string& color, bool square) {
    markers_.push_back({x, y, color, square});
  }

  void save(const std::filesystem::path& file) const {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series_)
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
        x0 = std::min(x0, s.x[k]);
        x1 = std::max(x1, s.x[k]);
        y0 = std::min(y0, s.y[k]);
        y1 = std::max(y1, s.y[k]);
      }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    pad(x0, x1);
    pad(y0, y1);
    const double pw = kW - 2 * kMargin, ph = kH - 2 * kMargin;
    if (equal_) {
      const double scale = std::max((x1 - x0) / pw, (y1 - y0) / ph);
      const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      x0 = cx - 0.5 * scale * pw, x1 = cx + 0.5 * scale * pw;
      y0 = cy - 0.5 * scale * ph, y1 = cy + 0.5 * scale * ph;
    }
    auto X = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return kH - kMargin - (y - y0) / (y1 - y0) * ph; };

    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title_
        << "</text>\n"
        << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = x0 + (x1 - x0) * t / 4, yv = y0 + (y1 - y0) * t / 4;
      out << "<text x=\"" << fmt(X(xv)) << "\" y=\"" << kH - kMargin + 16
          << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n"
          << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt(Y(yv) + 4) << "\" text-anchor=\"end\">"
          << fmt(yv) << "</text>\n";
    }
    out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 16 << "\" text-anchor=\"middle\">" << xl_
        << "</text>\n"
        << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kH / 2 << ")\">" << yl_ << "</text>\n";
    for (const auto& s : series_) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
          << "\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k)
        if (std::isfinite(s.x[k]) && std::isfinite(s.y[k]))
          out << fmt(X(s.x[k])) << ',' << fmt(Y(s.y[k])) << ' ';
      out << "\"/>\n";
    }
    for (const auto& m : markers_) {
      if (m.square)
        out << "<rect x=\"" << fmt(X(m.x) - 3) << "\" y=\"" << fmt(Y(m.y) - 3)
            << "\" width=\"6\" height=\"6\" fill=\"" << m.color << "\"/>\n";
      else
        out << "<circle cx=\"" << fmt(X(m.x)) << "\" cy=\"" << fmt(Y(m.y)) << "\" r=\"3.5\" fill=\""
            << m.color << "\"/>\n";
    }
    out << "</svg>\n";
  }

 private:
  static void pad(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double p = 0.04 * (hi - lo);
    lo -= p;
    hi += p;
  }

  struct Marker {
    double x, y;
    std::string color;
    bool square;
  };
  std::string title_, xl_, yl_;
  bool equal_;
  std::vector<Series> series_;
  std::vector<Marker> markers_;
};

std::vector<std::size_t> decimated(std::size_t n) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  const std::size_t step = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
  for (std::size_t k = 0; k < n; k += step) idx.push_back(k);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

double log10_floor(double v) { return std::log10(std::max(v, 1e-16)); }

}  // namespace

std::vector<std::filesystem::path> write_plots(const Scenario& sc, const Trace& trace,
                                               const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (trace.records.empty()) return files;
  std::filesystem::create_directories(dir);
  const int N = sc.n_robots();
  const int s = sc.stride();
  const int n = sc.mode == Mode::kDubins ? 3 : sc.dim();
  const auto idx = decimated(trace.records.size());

  static const char* axis_names[] = {"x", "y", "z"};
  std::vector<std::pair<int, int>> planes{{0, 1}};
  if (n >= 3) planes.insert(planes.end(), {{0, 2}, {1, 2}});
  for (auto [a, b] : planes) {
    const std::string tag = std::string(axis_names[a]) + axis_names[b];
    Chart chart("Trajectories (" + tag + ")", axis_names[a], axis_names[b], true);
    // Desired paths once per distinct path name, sampled over the w range seen.
    std::vector<std::string> drawn;
    for (int i = 0; i < N; ++i) {
      const auto& rs = sc.robots[i];
      if (std::find(drawn.begin(), drawn.end(), rs.path_name) != drawn.end()) continue;
      drawn.push_back(rs.path_name);
      double lo, hi;
      if (rs.path.period()) {
        lo = 0.0;
        hi = *rs.path.period();
      } else {
        lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int r = 0; r < N; ++r) {
          if (sc.robots[r].path_name != rs.path_name) continue;
          for (std::size_t k : idx) {
            lo = std::min(lo, trace.records[k].state[r * s + s - 1]);
            hi = std::max(hi, trace.records[k].state[r * s + s - 1]);
          }
        }
      }
      Series d{{}, {}, "#b0b0b0", 2.5};
      for (int k = 0; k <= 720; ++k) {
        const Eigen::VectorXd f = rs.path.evaluate(lo + (hi - lo) * k / 720.0);
        d.x.push_back(f[a]);
        d.y.push_back(f[b]);
      }
      chart.add(std::move(d));
    }
    for (int i = 0; i < N; ++i) {
      Series tr{{}, {}, palette(i), 1.2};
      for (std::size_t k : idx) {
        tr.x.push_back(trace.records[k].state[i * s + a]);
        tr.y.push_back(trace.records[k].state[i * s + b]);
      }
      chart.marker(tr.x.front(), tr.y.front(), palette(i), true);
      chart.marker(tr.x.back(), tr.y.back(), palette(i), false);
      chart.add(std::move(tr));
    }
    files.push_back(dir / ("traj_" + tag + ".svg"));
    chart.save(files.back());
  }

  auto time_chart = [&](const std::string& file, const std::string& title, const std::string& ylabel,
                        int count, auto&& value) {
    Chart chart(title, "t", ylabel);
    for (int c = 0; c < count; ++c) {
      Series ser{{}, {}, palette(c), 1.2};
      for (std::size_t k : idx) {
        ser.x.push_back(trace.records[k].t);
        ser.y.push_back(value(trace.records[k], c));
      }
      chart.add(std::move(ser));
    }
    files.push_back(dir / file);
    chart.save(files.back());
  };
  time_chart("phi_norm.svg", "Path-following error", "log10 |phi_i|", N,
             [](const TraceRecord& r, int c) { return log10_floor(r.phi_norm[c]); });
  const int E = static_cast<int>(sc.graph.edges().size());
  if (E > 0)
    time_chart("coordination_error.svg", "Coordination error", "log10 |w_i - w_j - delta_ij|", E,
               [](const TraceRecord& r, int c) { return log10_floor(std::abs(r.edge_error[c])); });
  if (sc.mode == Mode::kDubins)
    time_chart("sigma.svg", "Heading error", "sigma_i [rad]", N,
               [](const TraceRecord& r, int c) { return r.sigma[c]; });
  return files;
}

}  // namespace cgvf
