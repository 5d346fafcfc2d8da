#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace affq {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// precondition / domain violations; the CLI maps these to exit code 1
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// solver gave up before the residual contract was met; exit code 2
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpinLabel {
  int twice = 0;

  SpinLabel() = default;
  explicit SpinLabel(int twice_s) : twice(twice_s) {
    if (twice_s < 0) throw ValidationError("spin label 2s must be non-negative");
  }

  double value() const { return 0.5 * twice; }
  int dim() const { return twice + 1; }
  bool half_integer() const { return twice % 2 != 0; }
  double casimir() const { return value() * (value() + 1.0); }
  std::string str() const {
    return twice % 2 ? std::to_string(twice) + "/2" : std::to_string(twice / 2);
  }
  friend bool operator==(SpinLabel a, SpinLabel b) { return a.twice == b.twice; }
};

// "1/2", "3/2", "1", "0.5"
SpinLabel parse_spin(const std::string& text);

}  // namespace affq
