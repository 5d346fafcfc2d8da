#include "affq/halfspin_reps.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace affq {

SpinLabel parse_spin(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      int num = std::stoi(text.substr(0, slash));
      int den = std::stoi(text.substr(slash + 1));
      if (den == 2) return SpinLabel(num);
      if (den == 1) return SpinLabel(2 * num);
    } else {
      double v = std::stod(text);
      double tw = 2.0 * v;
      if (std::abs(tw - std::round(tw)) < 1e-12) return SpinLabel(static_cast<int>(std::lround(tw)));
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw ValidationError("not a spin label: '" + text + "'");
}

SpinMatrices build_spin_matrices(SpinLabel s) {
  const int N = s.dim();
  const double ss = s.casimir();
  CMat S3 = CMat::Zero(N, N), Sp = CMat::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    double m = s.value() - i;
    S3(i, i) = m;
    if (i > 0) Sp(i - 1, i) = std::sqrt(ss - m * (m + 1.0));
  }
  CMat Sm = Sp.adjoint();
  SpinMatrices out{s, {}};
  out.S[0] = 0.5 * (Sp + Sm);
  out.S[1] = (Sp - Sm) / cplx(0.0, 2.0);
  out.S[2] = S3;
  return out;
}

std::array<Mat2c, 3> pauli_matrices() {
  const cplx I(0.0, 1.0);
  Mat2c s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

Mat2c su2_from_rotation_vector(const Vec3& k) {
  const double kn = k.norm();
  if (kn > two_pi * (1.0 + 1e-12))
    throw ValidationError("rotation vector magnitude exceeds 2 pi");
  const double c = std::cos(0.5 * kn);
  // sin(k/2)/k, regular at k = 0
  const double sk = kn < 1e-6 ? 0.5 - kn * kn / 48.0 : std::sin(0.5 * kn) / kn;
  const auto sg = pauli_matrices();
  Mat2c u = c * Mat2c::Identity();
  for (int a = 0; a < 3; ++a) u -= cplx(0.0, sk * k[a]) * sg[a];
  return u;
}

void require_su2(const Mat2c& u, double tol) {
  if (!u.allFinite()) throw ValidationError("SU(2) element has non-finite entries");
  double unit = (u.adjoint() * u - Mat2c::Identity()).norm();
  double det = std::abs(u.determinant() - 1.0);
  if (unit > tol || det > tol)
    throw ValidationError("matrix is not in SU(2) (unitarity defect " + std::to_string(unit) +
                          ", det defect " + std::to_string(det) + ")");
}

Vec3 rotation_vector_from_su2(const Mat2c& u) {
  require_su2(u);
  const auto sg = pauli_matrices();
  const double c = 0.5 * u.trace().real();
  Vec3 v;
  for (int a = 0; a < 3; ++a) v[a] = -0.5 * (sg[a] * u).trace().imag();
  const double s = v.norm();
  if (s < 1e-15) {
    if (c > 0) return Vec3::Zero();
    return Vec3(0.0, 0.0, two_pi);
  }
  const double k = 2.0 * std::atan2(s, c);
  return (k / s) * v;
}

CMat wigner_d(const SpinMatrices& sm, const Vec3& k) {
  const int N = sm.s.dim();
  CMat H = k[0] * sm.S[0] + k[1] * sm.S[1] + k[2] * sm.S[2];
  if (N == 1) return CMat::Identity(1, 1);
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  Eigen::VectorXcd ph(N);
  for (int i = 0; i < N; ++i) ph[i] = std::exp(cplx(0.0, -es.eigenvalues()[i]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMat wigner_d(SpinLabel s, const Mat2c& u) {
  return wigner_d(build_spin_matrices(s), rotation_vector_from_su2(u));
}

int parity_factor(SpinLabel s, const Mat2c& u, double tol) {
  auto sm = build_spin_matrices(s);
  CMat d = wigner_d(sm, rotation_vector_from_su2(u));
  CMat dm = wigner_d(sm, rotation_vector_from_su2(-u));
  cplx rho = (d.adjoint() * dm).trace() / double(s.dim());
  if ((dm - rho * d).norm() > tol * std::sqrt(double(s.dim())) || std::abs(std::abs(rho) - 1.0) > tol ||
      std::abs(rho.imag()) > tol)
    throw std::logic_error("D(-u) is not a scalar multiple of D(u)");
  return rho.real() > 0 ? 1 : -1;
}

Mat2c random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q[i] = g(rng);
  q.normalize();
  const cplx I(0.0, 1.0);
  Mat2c u;
  u << q[0] - I * q[3], -q[2] - I * q[1], q[2] - I * q[1], q[0] + I * q[3];
  return u;
}

}  // namespace affq
