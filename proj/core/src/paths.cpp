#include "cgvf/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cgvf/error.hpp"

namespace cgvf {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// g(u) = sin(u) * sqrt(q(u)),  q(u) = 0.5 * (1 - 0.5 sin^2 u) >= 0.25.
struct LobeDerivs {
  double g, dg, ddg;
};

LobeDerivs lobe(double u) {
  const double s = std::sin(u);
  const double c = std::cos(u);
  const double q = 0.5 - 0.25 * s * s;
  const double dq = -0.5 * s * c;
  const double ddq = -0.5 * (c * c - s * s);
  const double h = std::sqrt(q);
  const double dh = dq / (2.0 * h);
  const double ddh = ddq / (2.0 * h) - dq * dq / (4.0 * h * h * h);
  return {s * h, c * h + s * dh, -s * h + 2.0 * c * dh + s * ddh};
}

double term_value(const Term& t, double w) {
  const double u = t.frequency * w + t.phase;
  switch (t.kind) {
    case TermKind::kCosine: return t.amplitude * std::cos(u) + t.offset;
    case TermKind::kSine: return t.amplitude * std::sin(u) + t.offset;
    case TermKind::kPower: return t.amplitude * ipow(u, t.degree) + t.offset;
    case TermKind::kBentLobe: return t.amplitude * lobe(u).g + t.offset;
  }
  return 0.0;
}

double term_first(const Term& t, double w) {
  const double u = t.frequency * w + t.phase;
  const double b = t.frequency;
  switch (t.kind) {
    case TermKind::kCosine: return -t.amplitude * b * std::sin(u);
    case TermKind::kSine: return t.amplitude * b * std::cos(u);
    case TermKind::kPower:
      return t.degree == 0 ? 0.0 : t.amplitude * t.degree * b * ipow(u, t.degree - 1);
    case TermKind::kBentLobe: return t.amplitude * b * lobe(u).dg;
  }
  return 0.0;
}

double term_second(const Term& t, double w) {
  const double u = t.frequency * w + t.phase;
  const double b2 = t.frequency * t.frequency;
  switch (t.kind) {
    case TermKind::kCosine: return -t.amplitude * b2 * std::cos(u);
    case TermKind::kSine: return -t.amplitude * b2 * std::sin(u);
    case TermKind::kPower:
      return t.degree < 2 ? 0.0
                          : t.amplitude * t.degree * (t.degree - 1) * b2 * ipow(u, t.degree - 2);
    case TermKind::kBentLobe: return t.amplitude * b2 * lobe(u).ddg;
  }
  return 0.0;
}

Term cos_term(double a, double b, double c = 0.0, double d = 0.0) {
  return {TermKind::kCosine, a, b, c, d, 0};
}
Term sin_term(double a, double b, double c = 0.0, double d = 0.0) {
  return {TermKind::kSine, a, b, c, d, 0};
}
Term const_term(double d) { return {TermKind::kPower, 0.0, 1.0, 0.0, d, 0}; }

}  // namespace

CoordFunction::CoordFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.kind == TermKind::kPower && t.degree < 0)
      throw Error("power term degree must be >= 0");
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.frequency) || !std::isfinite(t.phase) ||
        !std::isfinite(t.offset))
      throw Error("path term coefficients must be finite");
  }
}

double CoordFunction::value(double w) const {
  double s = 0.0;
  for (const auto& t : terms_) s += term_value(t, w);
  return s;
}

double CoordFunction::first(double w) const {
  double s = 0.0;
  for (const auto& t : terms_) s += term_first(t, w);
  return s;
}

double CoordFunction::second(double w) const {
  double s = 0.0;
  for (const auto& t : terms_) s += term_second(t, w);
  return s;
}

ParametricPath::ParametricPath(std::vector<CoordFunction> coords, std::optional<double> period)
    : coords_(std::move(coords)), period_(period) {
  if (coords_.size() < 2) throw Error("path dimension must be >= 2");
  if (period_ && !(*period_ > 0.0 && std::isfinite(*period_)))
    throw Error("path period must be positive");
}

Eigen::VectorXd ParametricPath::evaluate(double w) const {
  Eigen::VectorXd out(dim());
  for (int j = 0; j < dim(); ++j) out[j] = coords_[j].value(w);
  return out;
}

Eigen::VectorXd ParametricPath::derivative(double w) const {
  Eigen::VectorXd out(dim());
  for (int j = 0; j < dim(); ++j) out[j] = coords_[j].first(w);
  return out;
}

Eigen::VectorXd ParametricPath::second_derivative(double w) const {
  Eigen::VectorXd out(dim());
  for (int j = 0; j < dim(); ++j) out[j] = coords_[j].second(w);
  return out;
}

PathError path_error(const ParametricPath& path, const Eigen::Ref<const Eigen::VectorXd>& xi) {
  const int n = path.dim();
  if (xi.size() != n + 1) throw Error("generalized state must have n+1 entries");
  PathError e;
  e.phi = xi.head(n) - path.evaluate(xi[n]);
  e.norm = e.phi.norm();
  return e;
}

bool DerivativeAudit::finite() const {
  return std::isfinite(max_first) && std::isfinite(max_second) && lo.allFinite() &&
         hi.allFinite();
}

DerivativeAudit audit_derivatives(const ParametricPath& path, double open_window, int samples) {
  DerivativeAudit a;
  if (path.period()) {
    a.w_lo = 0.0;
    a.w_hi = *path.period();
  } else {
    a.w_lo = -open_window;
    a.w_hi = open_window;
  }
  const int n = path.dim();
  a.lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  a.hi = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  for (int k = 0; k < samples; ++k) {
    const double w = a.w_lo + (a.w_hi - a.w_lo) * k / (samples - 1);
    const Eigen::VectorXd f = path.evaluate(w);
    a.lo = a.lo.cwiseMin(f);
    a.hi = a.hi.cwiseMax(f);
    a.max_first = std::max(a.max_first, path.derivative(w).cwiseAbs().maxCoeff());
    a.max_second = std::max(a.max_second, path.second_derivative(w).cwiseAbs().maxCoeff());
  }
  return a;
}

double periodicity_defect(const ParametricPath& path, int samples) {
  if (!path.period()) return 0.0;
  const double T = *path.period();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double w = -T + 3.0 * T * k / (samples - 1);
    worst = std::max(worst, (path.evaluate(w + T) - path.evaluate(w)).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace catalog {

ParametricPath circle(double radius, double cx, double cy, std::optional<double> altitude) {
  return ellipse(radius, radius, cx, cy, altitude);
}

ParametricPath ellipse(double semi_x, double semi_y, double cx, double cy,
                       std::optional<double> altitude) {
  std::vector<CoordFunction> c{CoordFunction({cos_term(semi_x, 1.0, 0.0, cx)}),
                               CoordFunction({sin_term(semi_y, 1.0, 0.0, cy)})};
  if (altitude) c.emplace_back(std::vector<Term>{const_term(*altitude)});
  return ParametricPath(std::move(c), 2.0 * std::numbers::pi);
}

ParametricPath lissajous(const std::vector<double>& amp, const std::vector<double>& freq,
                         const std::vector<double>& phase, const std::vector<double>& offset,
                         std::optional<double> period) {
  const auto n = amp.size();
  if (freq.size() != n || phase.size() != n || offset.size() != n)
    throw Error("lissajous parameter lists must have equal length");
  std::vector<CoordFunction> c;
  for (std::size_t j = 0; j < n; ++j)
    c.emplace_back(std::vector<Term>{cos_term(amp[j], freq[j], phase[j], offset[j])});
  return ParametricPath(std::move(c), period);
}

ParametricPath bent_infinity() {
  std::vector<CoordFunction> c{
      CoordFunction({sin_term(15.0, 2.0)}),
      CoordFunction({Term{TermKind::kBentLobe, 30.0, 1.0, 0.0, 0.0, 0}}),
      CoordFunction({cos_term(5.0, 2.0, 0.0, 5.0 - 2.0)}),
  };
  return ParametricPath(std::move(c), 2.0 * std::numbers::pi);
}

ParametricPath flight_lissajous() {
  std::vector<CoordFunction> c{
      CoordFunction({cos_term(225.0, 1.0)}),
      CoordFunction({cos_term(225.0, 2.0, std::numbers::pi / 2.0)}),
      CoordFunction({cos_term(-20.0, 2.0)}),
  };
  return ParametricPath(std::move(c), 2.0 * std::numbers::pi);
}

ParametricPath line(const std::vector<double>& origin, const std::vector<double>& direction) {
  if (origin.size() != direction.size()) throw Error("line origin/direction size mismatch");
  std::vector<CoordFunction> c;
  for (std::size_t j = 0; j < origin.size(); ++j)
    c.emplace_back(std::vector<Term>{Term{TermKind::kPower, direction[j], 1.0, 0.0, origin[j], 1}});
  return ParametricPath(std::move(c));
}

}  // namespace catalog

}  // namespace cgvf
