#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgvf/control.hpp"
#include "cgvf/field.hpp"
#include "cgvf/graph.hpp"
#include "cgvf/paths.hpp"

namespace cgvf {

enum class Mode { kIntegrator, kDubins };

const char* to_string(Mode m);

struct RobotSpec {
  std::string path_name;  // label only
  ParametricPath path;
  GainSet gains;

  bool operator==(const RobotSpec&) const = default;
};

struct SafetyConfig {
  bool enabled = false;
  double R = 1.0;
  bool operator==(const SafetyConfig&) const = default;
};

/// How initial states are produced. Per-robot vectors have stride() entries:
/// (x_1..x_n, w) in integrator mode, (p_1, p_2, p_3, theta, w) in Dubins mode.
struct InitialCondition {
  enum class Kind { kExplicit, kBox, kOnPath };
  Kind kind = Kind::kOnPath;
  std::vector<Eigen::VectorXd> states;  // kExplicit
  Eigen::VectorXd box_lo;               // kBox
  Eigen::VectorXd box_hi;

  bool operator==(const InitialCondition& o) const;
};

struct Tolerances {
  double phi = 1e-2;
  double coordination = 1e-3;
  std::optional<double> min_distance;
  bool operator==(const Tolerances&) const = default;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::kIntegrator;
  std::vector<RobotSpec> robots;
  CommGraph graph;
  OffsetSpec offsets;
  double dt = 1e-2;
  double t_end = 10.0;
  double comm_hz = 0.0;  // 0 = continuous
  SafetyConfig safety;
  InitialCondition initial;
  std::uint64_t seed = 1;
  int record_stride = 1;
  Tolerances tolerances;

  int n_robots() const { return static_cast<int>(robots.size()); }
  int dim() const { return robots.empty() ? 0 : robots.front().path.dim(); }
  /// Entries per robot in the stacked state.
  int stride() const { return mode == Mode::kDubins ? 5 : dim() + 1; }
  long n_steps() const;

  std::vector<std::string> violations() const;
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Latest w and w_dot broadcast by every robot.
struct Broadcast {
  Eigen::VectorXd w;
  Eigen::VectorXd w_dot;
};

/// Read access to communicated neighbor scalars. Per-robot kernels see the
/// world only through this and their own state block.
class NeighborSource {
 public:
  virtual ~NeighborSource() = default;
  virtual double w(int j) const = 0;
  virtual double w_dot(int j) const = 0;
};

class BroadcastSource : public NeighborSource {
 public:
  explicit BroadcastSource(const Broadcast& b) : b_(b) {}
  double w(int j) const override { return b_.w[j]; }
  double w_dot(int j) const override { return b_.w_dot[j]; }

 private:
  const Broadcast& b_;
};

/// Zero-order-hold scheduler: comm_hz = 0 means every evaluation sees the truth;
/// otherwise the broadcast refreshes at steps that are multiples of
/// round(1 / (comm_hz * dt)).
class Communicator {
 public:
  Communicator(double comm_hz, double dt);

  bool continuous() const { return period_steps_ == 0; }
  long period_steps() const { return period_steps_; }
  bool due(long step) const { return continuous() || step % period_steps_ == 0; }

  void publish(Broadcast truth) { held_ = std::move(truth); }
  const Broadcast& held() const { return held_; }

 private:
  long period_steps_;
  Broadcast held_;
};

/// Neighbor view of robot i in ascending neighbor order.
std::vector<NeighborValue> neighbor_view(const CommGraph& g, int i, const NeighborSource& src);

/// Per-robot integrator-mode field chi_i from its own block and neighbor scalars.
Eigen::VectorXd robot_field(const Scenario& sc, int i, const Eigen::Ref<const Eigen::VectorXd>& xi,
                            const NeighborSource& src);

/// Per-robot Dubins telemetry + derivative from its own block and neighbor scalars.
struct DubinsEval {
  ControlOutput control;
  DubinsDerivative derivative;
  Eigen::VectorXd chi;
};
DubinsEval robot_dubins(const Scenario& sc, int i, const Eigen::Ref<const Eigen::VectorXd>& block,
                        const NeighborSource& src);

/// Time derivative of the stacked state with neighbor scalars supplied by
/// `src` (nullptr: read w directly from `state`).
Eigen::VectorXd stacked_rates(const Scenario& sc, const Eigen::VectorXd& state,
                              const NeighborSource* src);

/// w and w_dot of every robot at `state` under continuous communication.
Broadcast truth_broadcast(const Scenario& sc, const Eigen::VectorXd& state);

/// One RK4 step of the coupled single-integrator flow, continuous communication.
Eigen::VectorXd step_integrator(const Scenario& sc, const Eigen::VectorXd& state, double dt);
/// One RK4 step of the Dubins plant, continuous communication; yaw wrapped.
Eigen::VectorXd step_dubins(const Scenario& sc, const Eigen::VectorXd& state, double dt);

/// Initial stacked state (deterministic in seed).
Eigen::VectorXd initial_state(const Scenario& sc, std::uint64_t seed);

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd state;
  Eigen::VectorXd phi_norm;
  Eigen::VectorXd edge_error;
  Eigen::VectorXd sigma;        // Dubins only
  Eigen::VectorXd u_theta;      // Dubins only
  std::vector<std::uint8_t> saturated;
  std::vector<std::uint8_t> condition_violated;
  double min_distance = 0.0;
};

struct Trace {
  Mode mode = Mode::kIntegrator;
  int n_robots = 0;
  int dim = 0;
  int stride = 0;
  std::vector<Edge> edges;
  std::vector<TraceRecord> records;
};

/// Record of the quantities listed in TraceRecord at `state`.
TraceRecord make_record(const Scenario& sc, double t, const Eigen::VectorXd& state,
                        const NeighborSource* src);

/// Fixed-step deterministic simulator.
class Simulator {
 public:
  explicit Simulator(const Scenario& sc, std::optional<std::uint64_t> seed = std::nullopt);
  Simulator(const Scenario& sc, Eigen::VectorXd initial);

  const Scenario& scenario() const { return sc_; }
  const Eigen::VectorXd& state() const { return x_; }
  double time() const { return static_cast<double>(step_) * sc_.dt; }
  long step_index() const { return step_; }
  const Communicator& communicator() const { return comm_; }

  /// Record of the current state under the view in force.
  TraceRecord record() const;

  /// Advance one dt. Throws PlanarDegeneracy, CollisionState or DivergedState.
  void advance();

 private:
  void refresh_communication();
  const NeighborSource* view() const;

  Scenario sc_;
  Eigen::VectorXd x_;
  long step_ = 0;
  Communicator comm_;
  std::optional<BroadcastSource> held_src_;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> record_stride;
  /// Called for each recorded row (e.g. incremental CSV export).
  std::function<void(const TraceRecord&)> on_record;
  /// Called after every step with the simulator.
  std::function<void(const Simulator&)> on_step;
};

/// Runs the scenario to t_end appending to `out`. Exceptions from the stepper
/// propagate; `out` then holds everything recorded before the failure.
void run_into(const Scenario& sc, Trace& out, const RunOptions& opts = {});
Trace run(const Scenario& sc, const RunOptions& opts = {});

/// Stacked path-following error Phi and coordination error vector w - w*.
Eigen::VectorXd stacked_phi(const Scenario& sc, const Eigen::VectorXd& state);
Eigen::VectorXd stacked_w(const Scenario& sc, const Eigen::VectorXd& state);

/// |(Phi, D^T (w - w*))|.
double composite_error(const Scenario& sc, const Eigen::VectorXd& state);

/// V = 1/2 |Phi|^2 + 1/2 k_c (w - w*)^T L (w - w*). Integrator mode with every
/// k_ij = 1 and a shared k_c; otherwise throws NotApplicable.
double lyapunov_k1(const Scenario& sc, const Eigen::VectorXd& state);
std::vector<double> lyapunov_series(const Scenario& sc, const Trace& trace);

/// Smallest pairwise distance between physical positions.
double min_pairwise_distance(const Scenario& sc, const Eigen::VectorXd& state);

inline constexpr double kDivergenceBound = 1e9;
inline constexpr double kAntiparallelNudge = 1e-6;

}  // namespace cgvf
