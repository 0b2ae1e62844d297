// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Reference values come from independent routes (cgvf/oracles.hpp or inline
// brute force), never from the code path under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cgvf/error.hpp"
#include "cgvf/oracles.hpp"
#include "cgvf/report.hpp"
#include "cgvf/scenario_file.hpp"

using namespace cgvf;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kScenarios = CGVF_SCENARIO_DIR;

// Pinned tolerances.
constexpr double kMinFieldNorm = 1e-9;
constexpr double kSingularityBudgetS = 10.0;
constexpr int kSingularitySamples = 100000;
constexpr double kWedgeTol = 1e-12;
constexpr int kWedgeSamples = 1000;
constexpr double kErrorDynamicsRtol = 1e-6;
constexpr int kErrorDynamicsCheckpoints = 1000;
constexpr double kFig1Phi = 1e-2;
constexpr double kFig1Coordination = 1e-3;
constexpr double kFig1BudgetS = 60.0;
constexpr double kFig3Coordination = 1e-3;
constexpr double kFig3Separation = 0.5;
constexpr double kSigmaTol = 1e-2;
constexpr double kSigmaAfterS = 20.0;
constexpr double kSinTol = 1e-12;
constexpr double kLyapunovIncrease = 1e-8;
constexpr double kLyapunovRtol = 1e-4;
// V-dot comparisons are made where V is above this floor; below it the rate
// is lost in floating-point cancellation of V itself.
constexpr double kLyapunovFloor = 1e-6;
constexpr double kDriftTol = 1e-6;
constexpr double kSafetySlack = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario load(const std::string& name) { return load_scenario_file(kScenarios / (name + ".json")).scenario; }

// Every distinct path used by a shipped scenario file.
std::map<std::string, ParametricPath> shipped_paths() {
  std::map<std::string, ParametricPath> out;
  for (const auto& e : fs::directory_iterator(kScenarios)) {
    if (e.path().extension() != ".json") continue;
    const Scenario sc = load_scenario_file(e.path()).scenario;
    for (const auto& r : sc.robots) out.emplace(e.path().stem().string() + ":" + r.path_name, r.path);
  }
  // Drop duplicates that are the same curve under another file name.
  std::map<std::string, ParametricPath> unique;
  for (const auto& [k, p] : out) {
    bool seen = false;
    for (const auto& [k2, p2] : unique) seen = seen || p2 == p;
    if (!seen) unique.emplace(k, p);
  }
  return unique;
}

// 1 -------------------------------------------------------------------------
Outcome singularity_freeness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_path;
  const auto paths = shipped_paths();
  for (const auto& [name, p] : paths) {
    const int n = p.dim();
    const auto audit = audit_derivatives(p);
    GainSet g;
    g.k = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd lo(n + 1), hi(n + 1);
    for (int j = 0; j < n; ++j) {
      const double c = 0.5 * (audit.lo[j] + audit.hi[j]);
      const double half = 1.5 * std::max(audit.hi[j] - audit.lo[j], 1.0);
      lo[j] = c - half;
      hi[j] = c + half;
    }
    // The w range scales the same way around the audited parameter window.
    const double wc = 0.5 * (audit.w_lo + audit.w_hi), wh = 1.5 * (audit.w_hi - audit.w_lo);
    lo[n] = wc - wh;
    hi[n] = wc + wh;
    Eigen::VectorXd xi(n + 1);
    for (int s = 0; s < kSingularitySamples; ++s) {
      for (int j = 0; j <= n; ++j) xi[j] = std::uniform_real_distribution<double>(lo[j], hi[j])(rng);
      const double norm = pf_field(p, g, xi).norm();
      if (norm < worst) {
        worst = norm;
        worst_path = name;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst > kMinFieldNorm && secs < kSingularityBudgetS,
          std::to_string(paths.size()) + " paths x 1e5 states, min |chi| = " + fmt("%.3e", worst) + " (" +
              worst_path + "), " + fmt("%.2f s", secs)};
}

// 2 -------------------------------------------------------------------------
Outcome wedge_equivalence() {
  std::mt19937_64 rng(102);
  std::vector<ParametricPath> pool;
  for (const auto& [name, p] : shipped_paths()) pool.push_back(p);
  double worst = 0.0;
  int counts[2] = {0, 0};
  for (int s = 0; s < kWedgeSamples; ++s) {
    const ParametricPath& p = pool[s % pool.size()];
    const int n = p.dim();
    ++counts[n - 2];
    Eigen::VectorXd xi(n + 1);
    for (int j = 0; j <= n; ++j) xi[j] = std::uniform_real_distribution<double>(-50, 50)(rng);
    GainSet g;
    g.k = Eigen::VectorXd::Zero(n);  // closed form reduced to its propagation term
    worst = std::max(worst, (pf_field(p, g, xi) - wedge_oracle(p, xi)).cwiseAbs().maxCoeff());
  }
  return {worst < kWedgeTol && counts[0] > 0 && counts[1] > 0,
          "n=2: " + std::to_string(counts[0]) + ", n=3: " + std::to_string(counts[1]) +
              " samples, max |dev| = " + fmt("%.3e", worst)};
}

// 3 -------------------------------------------------------------------------
// Checkpoints are the states of a dt = 1e-3 run. At each checkpoint the
// derivative is differenced over RK4 sub-steps of kFdStep in both directions:
// differencing across dt itself carries a truncation error of order
// (omega dt)^4 / 30, which is ~1e-5 for the fast parameter motion of these
// paths early in the run and would mask the quantity under test.
constexpr double kFdStep = 1e-5;

Outcome error_dynamics() {
  double worst_phi = 0.0, worst_w = 0.0;
  int checked = 0;
  std::string detail;
  for (const char* name : {"fig2_desk", "fig3_desk"}) {
    Scenario sc = load(name);
    sc.dt = 1e-3;
    Eigen::VectorXd x = initial_state(sc, sc.seed);
    double phi_err = 0.0, w_err = 0.0;
    for (int k = 0; k < kErrorDynamicsCheckpoints / 2; ++k) {
      x = step_integrator(sc, x, sc.dt);
      Eigen::VectorXd around[4];
      const double offs[4] = {-2, -1, 1, 2};
      for (int m = 0; m < 4; ++m) {
        around[m] = x;
        for (int r = 0; r < std::abs(static_cast<int>(offs[m])); ++r)
          around[m] = step_integrator(sc, around[m], offs[m] > 0 ? kFdStep : -kFdStep);
      }
      auto stencil = [&](auto q) {
        return Eigen::VectorXd((q(around[0]) - 8.0 * q(around[1]) + 8.0 * q(around[2]) - q(around[3])) /
                               (12.0 * kFdStep));
      };
      const auto ed = oracle::error_dynamics(sc, x);
      const Eigen::VectorXd fd_phi = stencil([&](const Eigen::VectorXd& y) { return stacked_phi(sc, y); });
      const Eigen::VectorXd fd_w = stencil([&](const Eigen::VectorXd& y) {
        return Eigen::VectorXd(stacked_w(sc, y) - sc.offsets.w_star);
      });
      phi_err = std::max(phi_err, (fd_phi - ed.phi_dot).norm() / ed.phi_dot.norm());
      w_err = std::max(w_err, (fd_w - ed.w_tilde_dot).norm() / ed.w_tilde_dot.norm());
      ++checked;
    }
    worst_phi = std::max(worst_phi, phi_err);
    worst_w = std::max(worst_w, w_err);
    detail += std::string(detail.empty() ? "" : "; ") + name + " n=" + std::to_string(sc.dim()) +
              ": rel err Phi_dot " + fmt("%.3e", phi_err) + ", w~_dot " + fmt("%.3e", w_err);
  }
  return {worst_phi < kErrorDynamicsRtol && worst_w < kErrorDynamicsRtol && checked >= kErrorDynamicsCheckpoints,
          std::to_string(checked) + " checkpoints; " + detail};
}

// 4 and 8 share one run of the desk-scale figure-eight scenario.
struct Fig1Result {
  Outcome replica;
  Outcome lyapunov;
};

Fig1Result fig1_desk_and_lyapunov() {
  const Scenario sc = load("fig1_desk");
  const auto t0 = Clock::now();

  // Per-step V and a sliding window of five states for the V-dot stencil.
  std::deque<Eigen::VectorXd> window;
  std::deque<double> vwin;
  double max_increase = -std::numeric_limits<double>::infinity();
  double worst_rate = 0.0;
  long rate_checks = 0;
  double lyapunov_time = 0.0;
  Simulator sim(sc);
  auto observe = [&](const Eigen::VectorXd& x) {
    const auto l0 = Clock::now();
    const double v = lyapunov_k1(sc, x);
    if (!vwin.empty()) max_increase = std::max(max_increase, v - vwin.back());
    window.push_back(x);
    vwin.push_back(v);
    if (window.size() > 5) {
      window.pop_front();
      vwin.pop_front();
    }
    if (window.size() == 5 && sim.step_index() % 50 == 0 && vwin[2] > kLyapunovFloor) {
      const double fd = (vwin[0] - 8.0 * vwin[1] + 8.0 * vwin[3] - vwin[4]) / (12.0 * sc.dt);
      const double an = oracle::lyapunov_rate_k1(sc, window[2]);
      worst_rate = std::max(worst_rate, std::abs(fd - an) / std::abs(an));
      ++rate_checks;
    }
    lyapunov_time += seconds_since(l0);
  };
  observe(sim.state());
  for (long k = 0; k < sc.n_steps(); ++k) {
    sim.advance();
    observe(sim.state());
  }
  const TraceRecord last = sim.record();
  const double secs = seconds_since(t0) - lyapunov_time;
  const double phi = last.phi_norm.maxCoeff();
  const double coord = last.edge_error.cwiseAbs().maxCoeff();

  Fig1Result r;
  r.replica = {phi < kFig1Phi && coord < kFig1Coordination && secs < kFig1BudgetS,
               "N=10, t=" + fmt("%.0f", sim.time()) + " s: max |Phi_i| = " + fmt("%.3e", phi) +
                   ", max edge error = " + fmt("%.3e", coord) + ", sim time " + fmt("%.1f s", secs)};
  r.lyapunov = {max_increase <= kLyapunovIncrease && worst_rate < kLyapunovRtol && rate_checks > 100,
                "max per-step increase " + fmt("%.3e", max_increase) + ", V_dot rel err " +
                    fmt("%.3e", worst_rate) + " over " + std::to_string(rate_checks) + " checkpoints"};
  return r;
}

// 5 -------------------------------------------------------------------------
Outcome fig3_desk() {
  const Scenario sc = load("fig3_desk");
  Simulator sim(sc);
  for (long k = 0; k < sc.n_steps(); ++k) sim.advance();
  const TraceRecord last = sim.record();
  const double coord = last.edge_error.cwiseAbs().maxCoeff();
  // Brute-force final pairwise separation.
  double sep = std::numeric_limits<double>::infinity();
  const int s = sc.stride();
  for (int i = 0; i < sc.n_robots(); ++i)
    for (int j = i + 1; j < sc.n_robots(); ++j)
      sep = std::min(sep, (sim.state().segment(i * s, 2) - sim.state().segment(j * s, 2)).norm());
  return {coord < kFig3Coordination && sep >= kFig3Separation,
          "N=9 on three paths: final max edge error " + fmt("%.3e", coord) + ", min final separation " +
              fmt("%.3f", sep)};
}

// 6 -------------------------------------------------------------------------
Outcome theorem2_alignment() {
  const Scenario sc = load("circle_dubins");
  const auto& g = sc.robots[0].gains;
  bool setup = sc.n_robots() == 1 && g.v == 1.0 && g.k_theta == 1.0 && g.sat_lo == -10.0 && g.sat_hi == 10.0;
  Simulator sim(sc);
  bool ever_saturated = false, crossed_pi = false;
  double late_sigma = 0.0, prev = sim.record().sigma[0];
  for (long k = 0; k < sc.n_steps(); ++k) {
    sim.advance();
    const TraceRecord r = sim.record();
    const double sigma = r.sigma[0];
    ever_saturated = ever_saturated || r.saturated[0];
    crossed_pi = crossed_pi || std::abs(sigma) >= std::numbers::pi || std::abs(sigma - prev) > std::numbers::pi;
    if (sim.time() > kSigmaAfterS) late_sigma = std::max(late_sigma, std::abs(sigma));
    prev = sigma;
  }
  return {setup && !ever_saturated && !crossed_pi && late_sigma < kSigmaTol,
          std::string("saturated: ") + (ever_saturated ? "yes" : "no") + ", crossed pi: " +
              (crossed_pi ? "yes" : "no") + ", max |sigma| for t > 20 s = " + fmt("%.3e", late_sigma)};
}

// 7 -------------------------------------------------------------------------
Outcome sin_identity() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> mag(1e-2, 1e3);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double a = ang(rng), b = ang(rng);
    const Eigen::Vector2d h(std::cos(a), std::sin(a));
    const Eigen::Vector2d chi = mag(rng) * Eigen::Vector2d(std::cos(b), std::sin(b));
    const Eigen::Vector2d chat = chi.normalized();
    const double lhs = h.x() * (-chat.y()) + h.y() * chat.x();  // h^T E chi_hat, E = [[0,-1],[1,0]]
    worst = std::max(worst, std::abs(lhs - std::sin(signed_angle(h, chi))));
  }
  return {worst < kSinTol, "1e4 pairs, max |h^T E chi_hat - sin sigma| = " + fmt("%.3e", worst)};
}

// 9 -------------------------------------------------------------------------
Outcome mean_drift() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"fig3_desk", "fig1_desk"}) {
    Scenario sc = load(name);
    sc.initial.kind = InitialCondition::Kind::kOnPath;
    sc.dt = 1e-3;
    const double target = sc.dim() % 2 == 0 ? 1.0 : -1.0;
    const int N = sc.n_robots(), s = sc.stride();
    Eigen::VectorXd x = initial_state(sc, sc.seed);
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const Eigen::VectorXd rates = stacked_rates(sc, x, nullptr);
      double mean = 0.0;
      for (int i = 0; i < N; ++i) mean += rates[i * s + s - 1];
      worst = std::max(worst, std::abs(mean / N - target));
      x = step_integrator(sc, x, sc.dt);
    }
    // Finite-difference check of the same rate over the whole window.
    const double fd = (stacked_w(sc, x).mean() - sc.offsets.w_star.mean()) / (1001 * sc.dt);
    worst = std::max(worst, std::abs(fd - target));
    ok = ok && worst < kDriftTol;
    detail += std::string(detail.empty() ? "" : ", ") + "n=" + std::to_string(sc.dim()) + " (" + name +
              "): max |d/dt mean w - (" + fmt("%+.0f", target) + ")| = " + fmt("%.3e", worst);
  }
  return {ok, detail};
}

// 10 ------------------------------------------------------------------------
Outcome safety() {
  auto min_distance = [](Scenario sc) {
    double d = std::numeric_limits<double>::infinity();
    Simulator sim(sc);
    d = std::min(d, min_pairwise_distance(sc, sim.state()));
    for (long k = 0; k < sc.n_steps(); ++k) {
      sim.advance();
      d = std::min(d, min_pairwise_distance(sc, sim.state()));
    }
    return d;
  };
  Scenario on = load("headon");
  Scenario off = on;
  off.safety.enabled = false;
  const double R = on.safety.R;
  const double d_on = min_distance(on), d_off = min_distance(off);
  return {on.safety.enabled && d_on >= R - kSafetySlack && d_off < R,
          "R=1: min distance with safety " + fmt("%.6f", d_on) + ", without " + fmt("%.6f", d_off)};
}

// 11 ------------------------------------------------------------------------
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "cgvf_acceptance_determinism";
  fs::create_directories(dir);
  auto csv_of = [&](const Scenario& sc, const std::string& file) {
    {
      CsvWriter w(dir / file, sc);
      RunOptions opts;
      opts.on_record = [&](const TraceRecord& r) { w.write(r); };
      run(sc, opts);
    }
    std::ifstream in(dir / file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = true;
  std::string detail;
  for (const char* name : {"fig2_desk", "flight_desk", "headon"}) {
    const Scenario sc = load(name);
    const std::string a = csv_of(sc, std::string(name) + "_a.csv");
    const std::string b = csv_of(sc, std::string(name) + "_b.csv");
    ok = ok && a == b && !a.empty();
    detail += std::string(detail.empty() ? "" : ", ") + name + (a == b ? " identical" : " DIFFER") + " (" +
              std::to_string(a.size()) + " bytes)";
  }
  fs::remove_all(dir);
  return {ok, detail};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "singularity-freeness", singularity_freeness);
  report(2, "wedge-oracle equivalence", wedge_equivalence);
  report(3, "error-dynamics consistency", error_dynamics);
  Fig1Result fig1;
  try {
    fig1 = fig1_desk_and_lyapunov();
  } catch (const std::exception& e) {
    fig1.replica = fig1.lyapunov = {false, std::string("exception: ") + e.what()};
  }
  report(4, "figure-eight desk replica", [&] { return fig1.replica; });
  report(5, "three-path desk replica", fig3_desk);
  report(6, "heading alignment", theorem2_alignment);
  report(7, "sin identity", sin_identity);
  report(8, "K=I Lyapunov certificate", [&] { return fig1.lyapunov; });
  report(9, "mean-parameter drift", mean_drift);
  report(10, "safety layer", safety);
  report(11, "determinism", determinism);

  std::printf("%d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
