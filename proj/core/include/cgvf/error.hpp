#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cgvf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planar part of the field collapsed (chi_1^2 + chi_2^2 <= gamma).
class PlanarDegeneracy : public Error {
 public:
  PlanarDegeneracy(int robot, double planar_sq, const std::string& state_dump)
      : Error("planar degeneracy at robot " + std::to_string(robot) +
              " (chi1^2+chi2^2=" + std::to_string(planar_sq) + "): " + state_dump),
        robot_(robot),
        planar_sq_(planar_sq) {}

  int robot() const { return robot_; }
  double planar_sq() const { return planar_sq_; }

 private:
  int robot_;
  double planar_sq_;
};

class CollisionState : public Error {
 public:
  using Error::Error;
};

class DivergedState : public Error {
 public:
  using Error::Error;
};

class MissingNeighbor : public Error {
 public:
  using Error::Error;
};

class InfeasibleQp : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Collects every violation found while validating a scenario document.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid scenario:";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace cgvf
