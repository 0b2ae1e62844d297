#include "cgvf/field.hpp"

#include <cmath>
#include <sstream>

#include "cgvf/error.hpp"

namespace cgvf {

namespace {

double sign_n(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Laplace expansion along the first row; used only for tiny matrices.
double cofactor_det(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c)
        if (c != col) minor(r - 1, cc++) = m(r, c);
    }
    det += ((col % 2 == 0) ? 1.0 : -1.0) * m(0, col) * cofactor_det(minor);
  }
  return det;
}

}  // namespace

Eigen::VectorXd GeneralizedState::stacked() const {
  Eigen::VectorXd xi(position.size() + 1);
  xi.head(position.size()) = position;
  xi[position.size()] = w;
  return xi;
}

GeneralizedState GeneralizedState::from_stacked(const Eigen::Ref<const Eigen::VectorXd>& xi) {
  return {xi.head(xi.size() - 1), xi[xi.size() - 1]};
}

std::vector<std::string> GainSet::violations() const {
  std::vector<std::string> out;
  if (k.size() == 0) out.emplace_back("gains.k: must be non-empty");
  for (Eigen::Index j = 0; j < k.size(); ++j)
    if (!(k[j] > 0.0) || !std::isfinite(k[j]))
      out.emplace_back("gains.k[" + std::to_string(j) + "]: must be > 0");
  auto positive = [&out](double x, const char* key) {
    if (!(x > 0.0) || !std::isfinite(x)) out.emplace_back(std::string(key) + ": must be > 0");
  };
  positive(k_c, "gains.k_c");
  positive(v, "gains.v");
  positive(k_theta, "gains.k_theta");
  positive(gamma, "gains.gamma");
  positive(R, "gains.R");
  if (!(sat_lo < 0.0)) out.emplace_back("gains.sat_lo: must be < 0");
  if (!(sat_hi > 0.0)) out.emplace_back("gains.sat_hi: must be > 0");
  return out;
}

void GainSet::validate() const {
  auto v = violations();
  if (!v.empty()) throw ScenarioError(std::move(v));
}

bool GainSet::operator==(const GainSet& o) const {
  return same_vector(k, o.k) && k_c == o.k_c && v == o.v && k_theta == o.k_theta && sat_lo == o.sat_lo &&
         sat_hi == o.sat_hi && gamma == o.gamma && R == o.R;
}

Eigen::MatrixXd surface_gradients(const ParametricPath& path, double w) {
  const int n = path.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n + 1);
  const Eigen::VectorXd d = path.derivative(w);
  for (int j = 0; j < n; ++j) {
    g(j, j) = 1.0;
    g(j, n) = -d[j];
  }
  return g;
}

Eigen::VectorXd pf_field(const ParametricPath& path, const GainSet& gains,
                         const Eigen::Ref<const Eigen::VectorXd>& xi) {
  const int n = path.dim();
  if (xi.size() != n + 1) throw Error("generalized state must have n+1 entries");
  if (gains.k.size() != n) throw Error("gain vector k must have n entries");
  const double s = sign_n(n);
  const double w = xi[n];
  Eigen::VectorXd chi(n + 1);
  double last = s;
  for (int j = 0; j < n; ++j) {
    const auto& f = path.coords()[j];
    const double df = f.first(w);
    const double phi = xi[j] - f.value(w);
    chi[j] = s * df - gains.k[j] * phi;
    last += gains.k[j] * phi * df;
  }
  chi[n] = last;
  return chi;
}

Eigen::VectorXd wedge_oracle(const ParametricPath& path,
                             const Eigen::Ref<const Eigen::VectorXd>& xi) {
  const int n = path.dim();
  if (n != 2 && n != 3) throw Error("wedge oracle supports n in {2, 3}");
  const Eigen::MatrixXd grads = surface_gradients(path, xi[n]);
  Eigen::VectorXd out(n + 1);
  // Component m is the cofactor of the unit-vector entry e_m in row 0.
  for (int m = 0; m <= n; ++m) {
    Eigen::MatrixXd basis_row = Eigen::MatrixXd::Zero(n + 1, n + 1);
    basis_row(0, m) = 1.0;
    basis_row.bottomRows(n) = grads;
    out[m] = cofactor_det(basis_row);
  }
  return out;
}

Eigen::VectorXd combined_field(const ParametricPath& path, const GainSet& gains,
                               const Eigen::Ref<const Eigen::VectorXd>& xi, double c_i) {
  Eigen::VectorXd chi = pf_field(path, gains, xi);
  chi[chi.size() - 1] += gains.k_c * c_i;
  return chi;
}

Eigen::VectorXd partial_normalize(const Eigen::Ref<const Eigen::VectorXd>& chi, double v,
                                  double gamma, int robot) {
  const double planar_sq = chi[0] * chi[0] + chi[1] * chi[1];
  if (!(planar_sq > gamma)) {
    std::ostringstream os;
    os << "chi=[" << chi.transpose() << "]";
    throw PlanarDegeneracy(robot, planar_sq, os.str());
  }
  return v * chi / std::sqrt(planar_sq);
}

FieldJacobian field_jacobian(const ParametricPath& path, const GainSet& gains,
                             const Eigen::Ref<const Eigen::VectorXd>& xi, int degree,
                             bool freeze_coordination) {
  const int n = path.dim();
  const double s = sign_n(n);
  const double w = xi[n];
  FieldJacobian jac{Eigen::MatrixXd::Zero(n + 1, n + 1), Eigen::MatrixXd::Zero(n + 1, degree)};
  auto& a = jac.wrt_state;
  double d_last_dw = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& f = path.coords()[j];
    const double df = f.first(w);
    const double ddf = f.second(w);
    const double phi = xi[j] - f.value(w);
    const double k = gains.k[j];
    a(j, j) = -k;
    a(j, n) = s * ddf + k * df;
    a(n, j) = k * df;
    d_last_dw += k * (phi * ddf - df * df);
  }
  a(n, n) = d_last_dw;
  if (!freeze_coordination) {
    a(n, n) -= gains.k_c * degree;
    jac.wrt_neighbors.row(n).setConstant(gains.k_c);
  }
  return jac;
}

}  // namespace cgvf
