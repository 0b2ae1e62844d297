#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace cgvf {

/// Size-checked exact equality (Eigen's operator== asserts on size mismatch).
inline bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

enum class TermKind {
  kCosine,     // a*cos(b*w + c) + d
  kSine,       // a*sin(b*w + c) + d
  kPower,      // a*(b*w + c)^degree + d
  kBentLobe,   // a*sin(u)*sqrt(0.5*(1 - 0.5*sin(u)^2)) + d,  u = b*w + c
};

struct Term {
  TermKind kind = TermKind::kCosine;
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
  double offset = 0.0;
  int degree = 0;  // kPower only

  bool operator==(const Term&) const = default;
};

/// One coordinate f_j(w) as a sum of closed-form terms.
class CoordFunction {
 public:
  CoordFunction() = default;
  explicit CoordFunction(std::vector<Term> terms);

  double value(double w) const;
  double first(double w) const;
  double second(double w) const;

  const std::vector<Term>& terms() const { return terms_; }
  bool operator==(const CoordFunction&) const = default;

 private:
  std::vector<Term> terms_;
};

/// Desired path x_j = f_j(w), j = 1..n, with exact first and second derivatives.
class ParametricPath {
 public:
  ParametricPath(std::vector<CoordFunction> coords, std::optional<double> period = std::nullopt);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<CoordFunction>& coords() const { return coords_; }
  std::optional<double> period() const { return period_; }

  Eigen::VectorXd evaluate(double w) const;
  Eigen::VectorXd derivative(double w) const;
  Eigen::VectorXd second_derivative(double w) const;

  bool operator==(const ParametricPath&) const = default;

 private:
  std::vector<CoordFunction> coords_;
  std::optional<double> period_;
};

struct PathError {
  Eigen::VectorXd phi;
  double norm = 0.0;
};

/// phi_j = x_j - f_j(w). `xi` is (x_1..x_n, w).
PathError path_error(const ParametricPath& path, const Eigen::Ref<const Eigen::VectorXd>& xi);

/// Sampled sup of |f'| and |f''| (and the bounding box of f) over a parameter window.
struct DerivativeAudit {
  double w_lo = 0.0;
  double w_hi = 0.0;
  double max_first = 0.0;
  double max_second = 0.0;
  Eigen::VectorXd lo;  // per-coordinate min of f over the window
  Eigen::VectorXd hi;  // per-coordinate max of f over the window
  bool finite() const;
};

inline constexpr int kAuditSamples = 10000;
inline constexpr double kDefaultOpenWindow = 100.0;

/// Uses [0, T] for periodic paths and [-window, window] otherwise.
DerivativeAudit audit_derivatives(const ParametricPath& path,
                                  double open_window = kDefaultOpenWindow,
                                  int samples = kAuditSamples);

/// Largest |f(w+T) - f(w)| over the audit grid; 0 for open curves.
double periodicity_defect(const ParametricPath& path, int samples = 1000);

namespace catalog {

ParametricPath circle(double radius, double cx = 0.0, double cy = 0.0,
                      std::optional<double> altitude = std::nullopt);
ParametricPath ellipse(double semi_x, double semi_y, double cx = 0.0, double cy = 0.0,
                       std::optional<double> altitude = std::nullopt);

/// x_j = amp_j * cos(freq_j * w + phase_j) + offset_j. Period is supplied by the caller
/// because rationality of the frequencies is not decidable from doubles.
ParametricPath lissajous(const std::vector<double>& amp, const std::vector<double>& freq,
                         const std::vector<double>& phase, const std::vector<double>& offset,
                         std::optional<double> period = std::nullopt);

/// Self-intersecting bent figure-eight:
/// (15 sin 2w, 30 sin w sqrt(0.5(1 - 0.5 sin^2 w)), 5 + 5 cos 2w - 2), period 2 pi.
ParametricPath bent_infinity();

/// Flight-test figure-eight: (225 cos w, 225 cos(2w + pi/2), -20 cos 2w), period 2 pi.
ParametricPath flight_lissajous();

/// x = origin + w * direction.
ParametricPath line(const std::vector<double>& origin, const std::vector<double>& direction);

}  // namespace catalog

}  // namespace cgvf
