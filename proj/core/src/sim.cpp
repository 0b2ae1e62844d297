#include "cgvf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "cgvf/error.hpp"
#include "cgvf/safety.hpp"

namespace cgvf {

namespace {

// Reads w straight from a stacked state; used for continuous communication.
class StateSource : public NeighborSource {
 public:
  StateSource(const Eigen::VectorXd& state, int stride) : x_(state), stride_(stride) {}
  double w(int j) const override { return x_[j * stride_ + stride_ - 1]; }
  double w_dot(int) const override {
    throw NotApplicable("w_dot is only carried by held broadcasts");
  }

 private:
  const Eigen::VectorXd& x_;
  int stride_;
};

std::vector<Neighbor> others_of(const Scenario& sc, int i, const Eigen::VectorXd& state,
                                const std::vector<Eigen::VectorXd>& nominal) {
  const int s = sc.stride();
  const int n = sc.dim();
  std::vector<Neighbor> out;
  for (int j = 0; j < sc.n_robots(); ++j) {
    if (j == i) continue;
    out.push_back({j, state.segment(j * s, n), nominal[j].head(n)});
  }
  return out;
}

void check_finite(const Eigen::VectorXd& x, double t) {
  for (Eigen::Index e = 0; e < x.size(); ++e) {
    if (!std::isfinite(x[e]) || std::abs(x[e]) > kDivergenceBound) {
      std::ostringstream os;
      os << "state diverged at t=" << t << " (entry " << e << " = " << x[e] << ")";
      throw DivergedState(os.str());
    }
  }
}

std::string dump_state(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << x.transpose() << "]";
  return os.str();
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::kDubins ? "dubins" : "integrator"; }

bool InitialCondition::operator==(const InitialCondition& o) const {
  if (kind != o.kind || states.size() != o.states.size()) return false;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!same_vector(states[i], o.states[i])) return false;
  return same_vector(box_lo, o.box_lo) && same_vector(box_hi, o.box_hi);
}

long Scenario::n_steps() const {
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

std::vector<std::string> Scenario::violations() const {
  std::vector<std::string> v;
  const int N = n_robots();
  if (N == 0) v.emplace_back("robots: at least one robot required");
  if (graph.n_nodes() != N) v.emplace_back("graph: node count must equal robot count");
  if (offsets.w_star.size() != graph.n_nodes())
    v.emplace_back("offsets.w_star: length must equal robot count");
  if (offsets.delta.size() != graph.n_edges())
    v.emplace_back("offsets: delta length must equal edge count");
  if (!(dt > 0.0)) v.emplace_back("dt: must be > 0");
  if (!(t_end > 0.0)) v.emplace_back("t_end: must be > 0");
  if (!(comm_hz >= 0.0)) v.emplace_back("comm_hz: must be >= 0");
  if (comm_hz > 0.0 && comm_hz * dt > 1.0 + 1e-12)
    v.emplace_back("comm_hz: comm_hz * dt must be <= 1");
  if (record_stride < 1) v.emplace_back("outputs.record_stride: must be >= 1");
  if (!(tolerances.phi > 0.0)) v.emplace_back("tolerances.phi: must be > 0");
  if (!(tolerances.coordination > 0.0)) v.emplace_back("tolerances.coordination: must be > 0");
  for (int i = 0; i < N; ++i) {
    const auto& r = robots[i];
    const std::string pre = "robots[" + std::to_string(i) + "].";
    if (r.path.dim() != dim()) v.push_back(pre + "path: all robots must share one dimension");
    if (r.gains.k.size() != r.path.dim()) v.push_back(pre + "gains.k: needs one gain per coordinate");
    for (auto& g : r.gains.violations()) v.push_back(pre + g);
  }
  if (mode == Mode::kDubins && N > 0 && dim() != 3)
    v.emplace_back("mode: dubins mode needs 3D paths");
  if (safety.enabled) {
    if (mode != Mode::kIntegrator) v.emplace_back("safety.enabled: only supported in integrator mode");
    if (!(safety.R > 0.0)) v.emplace_back("safety.R: must be > 0");
  }
  const int s = N > 0 ? stride() : 0;
  switch (initial.kind) {
    case InitialCondition::Kind::kExplicit:
      if (static_cast<int>(initial.states.size()) != N)
        v.emplace_back("initial.states: one state per robot required");
      for (std::size_t i = 0; i < initial.states.size(); ++i)
        if (initial.states[i].size() != s)
          v.push_back("initial.states[" + std::to_string(i) + "]: expected " + std::to_string(s) +
                      " entries");
      break;
    case InitialCondition::Kind::kBox:
      if (initial.box_lo.size() != s || initial.box_hi.size() != s)
        v.push_back("initial.box: lo/hi need " + std::to_string(s) + " entries");
      else if ((initial.box_lo.array() > initial.box_hi.array()).any())
        v.emplace_back("initial.box: lo must be <= hi");
      break;
    case InitialCondition::Kind::kOnPath: break;
  }
  return v;
}

void Scenario::validate() const {
  auto v = violations();
  if (!v.empty()) throw ScenarioError(std::move(v));
}

Communicator::Communicator(double comm_hz, double dt)
    : period_steps_(comm_hz > 0.0 ? std::max(1L, std::lround(1.0 / (comm_hz * dt))) : 0) {}

std::vector<NeighborValue> neighbor_view(const CommGraph& g, int i, const NeighborSource& src) {
  std::vector<NeighborValue> view;
  view.reserve(g.neighbors(i).size());
  for (int j : g.neighbors(i)) view.push_back({j, src.w(j)});
  return view;
}

Eigen::VectorXd robot_field(const Scenario& sc, int i, const Eigen::Ref<const Eigen::VectorXd>& xi,
                            const NeighborSource& src) {
  const auto& r = sc.robots[i];
  const auto view = neighbor_view(sc.graph, i, src);
  const double c = coordination_local(sc.graph, sc.offsets, i, xi[xi.size() - 1], view);
  return combined_field(r.path, r.gains, xi, c);
}

DubinsEval robot_dubins(const Scenario& sc, int i, const Eigen::Ref<const Eigen::VectorXd>& block,
                        const NeighborSource& src) {
  const auto& r = sc.robots[i];
  DubinsState ds;
  ds.p = block.head<3>();
  ds.theta = block[3];
  ds.w = block[4];
  const Eigen::VectorXd xi = ds.generalized();

  DubinsEval ev;
  ev.chi = robot_field(sc, i, xi, src);
  const auto vr = vertical_rates(ev.chi, r.gains, i);
  Eigen::Vector4d xi_dot(r.gains.v * std::cos(ds.theta), r.gains.v * std::sin(ds.theta), vr.u_z,
                         vr.w_dot);
  // Planar rows of the field never depend on neighbor w, so freezing the
  // coordination term loses nothing for chi_p_dot.
  const FieldJacobian jac = field_jacobian(r.path, r.gains, xi,
                                           static_cast<int>(sc.graph.neighbors(i).size()), true);
  const Eigen::Vector2d chi_p_dot = planar_field_rate(jac, xi_dot);
  ev.control = dubins_control(ds, ev.chi, chi_p_dot, r.gains, i);
  ev.derivative = dubins_derivative(ds, ev.control, r.gains.v);
  return ev;
}

Eigen::VectorXd stacked_rates(const Scenario& sc, const Eigen::VectorXd& state,
                              const NeighborSource* src) {
  const int s = sc.stride();
  const int N = sc.n_robots();
  StateSource truth(state, s);
  const NeighborSource& view = src ? *src : static_cast<const NeighborSource&>(truth);
  Eigen::VectorXd rates(state.size());

  if (sc.mode == Mode::kDubins) {
    for (int i = 0; i < N; ++i) {
      try {
        rates.segment<5>(i * s) = robot_dubins(sc, i, state.segment(i * s, s), view).derivative;
      } catch (const PlanarDegeneracy& e) {
        throw PlanarDegeneracy(i, e.planar_sq(), "state=" + dump_state(state.segment(i * s, s)));
      }
    }
    return rates;
  }

  std::vector<Eigen::VectorXd> nominal(N);
  for (int i = 0; i < N; ++i) nominal[i] = robot_field(sc, i, state.segment(i * s, s), view);
  for (int i = 0; i < N; ++i) {
    if (sc.safety.enabled && N > 1) {
      const auto others = others_of(sc, i, state, nominal);
      const auto corr =
          safe_correction(nominal[i], state.segment(i * s, sc.dim()), others, sc.safety.R);
      rates.segment(i * s, s) = nominal[i] + corr.u;
    } else {
      rates.segment(i * s, s) = nominal[i];
    }
  }
  return rates;
}

Broadcast truth_broadcast(const Scenario& sc, const Eigen::VectorXd& state) {
  const int s = sc.stride();
  const Eigen::VectorXd rates = stacked_rates(sc, state, nullptr);
  Broadcast b{Eigen::VectorXd(sc.n_robots()), Eigen::VectorXd(sc.n_robots())};
  for (int i = 0; i < sc.n_robots(); ++i) {
    b.w[i] = state[i * s + s - 1];
    b.w_dot[i] = rates[i * s + s - 1];
  }
  return b;
}

namespace {

Eigen::VectorXd rk4(const Scenario& sc, const Eigen::VectorXd& x, double dt,
                    const NeighborSource* src) {
  const Eigen::VectorXd k1 = stacked_rates(sc, x, src);
  const Eigen::VectorXd k2 = stacked_rates(sc, x + 0.5 * dt * k1, src);
  const Eigen::VectorXd k3 = stacked_rates(sc, x + 0.5 * dt * k2, src);
  const Eigen::VectorXd k4 = stacked_rates(sc, x + dt * k3, src);
  Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (sc.mode == Mode::kDubins)
    for (int i = 0; i < sc.n_robots(); ++i) next[i * 5 + 3] = wrap_angle(next[i * 5 + 3]);
  return next;
}

}  // namespace

Eigen::VectorXd step_integrator(const Scenario& sc, const Eigen::VectorXd& state, double dt) {
  if (sc.mode != Mode::kIntegrator) throw Error("step_integrator on a Dubins scenario");
  Eigen::VectorXd next = rk4(sc, state, dt, nullptr);
  check_finite(next, dt);
  return next;
}

Eigen::VectorXd step_dubins(const Scenario& sc, const Eigen::VectorXd& state, double dt) {
  if (sc.mode != Mode::kDubins) throw Error("step_dubins on an integrator scenario");
  Eigen::VectorXd next = rk4(sc, state, dt, nullptr);
  check_finite(next, dt);
  return next;
}

Eigen::VectorXd initial_state(const Scenario& sc, std::uint64_t seed) {
  const int s = sc.stride();
  const int N = sc.n_robots();
  Eigen::VectorXd x(N * s);
  switch (sc.initial.kind) {
    case InitialCondition::Kind::kExplicit:
      for (int i = 0; i < N; ++i) x.segment(i * s, s) = sc.initial.states[i];
      break;
    case InitialCondition::Kind::kBox: {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < N; ++i)
        for (int e = 0; e < s; ++e) {
          std::uniform_real_distribution<double> u(sc.initial.box_lo[e], sc.initial.box_hi[e]);
          x[i * s + e] = u(rng);
        }
      break;
    }
    case InitialCondition::Kind::kOnPath:
      for (int i = 0; i < N; ++i) {
        const double w = sc.offsets.w_star[i];
        const Eigen::VectorXd f = sc.robots[i].path.evaluate(w);
        if (sc.mode == Mode::kDubins) {
          Eigen::VectorXd xi(4);
          xi << f[0], f[1], f[2], w;
          const Eigen::VectorXd chi = pf_field(sc.robots[i].path, sc.robots[i].gains, xi);
          x.segment(i * s, 5) << f[0], f[1], f[2], std::atan2(chi[1], chi[0]), w;
        } else {
          x.segment(i * s, s - 1) = f;
          x[i * s + s - 1] = w;
        }
      }
      break;
  }
  if (sc.mode == Mode::kDubins) {
    for (int i = 0; i < N; ++i) {
      x[i * 5 + 3] = wrap_angle(x[i * 5 + 3]);
      const DubinsEval ev = robot_dubins(sc, i, x.segment(i * 5, 5), StateSource(x, 5));
      if (ev.control.sigma == std::numbers::pi) x[i * 5 + 3] = wrap_angle(x[i * 5 + 3] + kAntiparallelNudge);
    }
  }
  return x;
}

double min_pairwise_distance(const Scenario& sc, const Eigen::VectorXd& state) {
  const int s = sc.stride();
  const int n = sc.mode == Mode::kDubins ? 3 : sc.dim();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sc.n_robots(); ++i)
    for (int j = i + 1; j < sc.n_robots(); ++j)
      best = std::min(best, (state.segment(i * s, n) - state.segment(j * s, n)).norm());
  return best;
}

TraceRecord make_record(const Scenario& sc, double t, const Eigen::VectorXd& state,
                        const NeighborSource* src) {
  const int s = sc.stride();
  const int N = sc.n_robots();
  TraceRecord r;
  r.t = t;
  r.state = state;
  r.phi_norm.resize(N);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd xi(sc.dim() + 1);
    xi.head(sc.dim()) = state.segment(i * s, sc.dim());
    xi[sc.dim()] = state[i * s + s - 1];
    r.phi_norm[i] = path_error(sc.robots[i].path, xi).norm;
  }
  r.edge_error = edge_errors(sc.graph, sc.offsets, stacked_w(sc, state));
  r.min_distance = N > 1 ? min_pairwise_distance(sc, state) : 0.0;
  if (sc.mode == Mode::kDubins) {
    StateSource truth(state, s);
    const NeighborSource& view = src ? *src : static_cast<const NeighborSource&>(truth);
    r.sigma.resize(N);
    r.u_theta.resize(N);
    r.saturated.resize(N);
    r.condition_violated.resize(N);
    for (int i = 0; i < N; ++i) {
      const DubinsEval ev = robot_dubins(sc, i, state.segment(i * s, s), view);
      r.sigma[i] = ev.control.sigma;
      r.u_theta[i] = ev.control.u_theta;
      r.saturated[i] = ev.control.saturated;
      r.condition_violated[i] = ev.control.saturation_condition_violated;
    }
  }
  return r;
}

Simulator::Simulator(const Scenario& sc, std::optional<std::uint64_t> seed)
    : Simulator(sc, (sc.validate(), initial_state(sc, seed.value_or(sc.seed)))) {}

Simulator::Simulator(const Scenario& sc, Eigen::VectorXd initial)
    : sc_(sc), x_(std::move(initial)), comm_(sc.comm_hz, sc.dt) {
  sc_.validate();
  if (x_.size() != sc_.n_robots() * sc_.stride()) throw Error("initial state has wrong size");
  refresh_communication();
}

void Simulator::refresh_communication() {
  if (comm_.continuous() || !comm_.due(step_)) return;
  comm_.publish(truth_broadcast(sc_, x_));
  held_src_.emplace(comm_.held());
}

const NeighborSource* Simulator::view() const {
  return held_src_ ? &*held_src_ : nullptr;
}

TraceRecord Simulator::record() const { return make_record(sc_, time(), x_, view()); }

void Simulator::advance() {
  x_ = rk4(sc_, x_, sc_.dt, view());
  ++step_;
  check_finite(x_, time());
  refresh_communication();
}

void run_into(const Scenario& sc, Trace& out, const RunOptions& opts) {
  Simulator sim(sc, opts.seed);
  const int stride = opts.record_stride.value_or(sc.record_stride);
  out.mode = sc.mode;
  out.n_robots = sc.n_robots();
  out.dim = sc.dim();
  out.stride = sc.stride();
  out.edges = sc.graph.edges();
  out.records.clear();
  auto emit = [&] {
    out.records.push_back(sim.record());
    if (opts.on_record) opts.on_record(out.records.back());
  };
  emit();
  const long steps = sc.n_steps();
  for (long k = 1; k <= steps; ++k) {
    sim.advance();
    if (opts.on_step) opts.on_step(sim);
    if (k % stride == 0 || k == steps) emit();
  }
}

Trace run(const Scenario& sc, const RunOptions& opts) {
  Trace t;
  run_into(sc, t, opts);
  return t;
}

Eigen::VectorXd stacked_phi(const Scenario& sc, const Eigen::VectorXd& state) {
  const int s = sc.stride();
  const int n = sc.dim();
  Eigen::VectorXd phi(sc.n_robots() * n);
  for (int i = 0; i < sc.n_robots(); ++i) {
    Eigen::VectorXd xi(n + 1);
    xi.head(n) = state.segment(i * s, n);
    xi[n] = state[i * s + s - 1];
    phi.segment(i * n, n) = path_error(sc.robots[i].path, xi).phi;
  }
  return phi;
}

Eigen::VectorXd stacked_w(const Scenario& sc, const Eigen::VectorXd& state) {
  const int s = sc.stride();
  Eigen::VectorXd w(sc.n_robots());
  for (int i = 0; i < sc.n_robots(); ++i) w[i] = state[i * s + s - 1];
  return w;
}

double composite_error(const Scenario& sc, const Eigen::VectorXd& state) {
  const Eigen::VectorXd phi = stacked_phi(sc, state);
  const Eigen::VectorXd e = edge_errors(sc.graph, sc.offsets, stacked_w(sc, state));
  return std::sqrt(phi.squaredNorm() + e.squaredNorm());
}

double lyapunov_k1(const Scenario& sc, const Eigen::VectorXd& state) {
  if (sc.mode != Mode::kIntegrator) throw NotApplicable("Lyapunov certificate needs integrator mode");
  for (const auto& r : sc.robots) {
    if ((r.gains.k.array() != 1.0).any()) throw NotApplicable("Lyapunov certificate needs K = I");
    if (r.gains.k_c != sc.robots.front().gains.k_c)
      throw NotApplicable("Lyapunov certificate needs a shared k_c");
  }
  const double k_c = sc.robots.front().gains.k_c;
  // (w - w*)^T L (w - w*) = |D^T (w - w*)|^2 = |edge errors|^2
  const Eigen::VectorXd e = edge_errors(sc.graph, sc.offsets, stacked_w(sc, state));
  return 0.5 * stacked_phi(sc, state).squaredNorm() + 0.5 * k_c * e.squaredNorm();
}

std::vector<double> lyapunov_series(const Scenario& sc, const Trace& trace) {
  std::vector<double> v;
  v.reserve(trace.records.size());
  for (const auto& r : trace.records) v.push_back(lyapunov_k1(sc, r.state));
  return v;
}

}  // namespace cgvf
