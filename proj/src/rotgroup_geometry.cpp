#include "affq/rotgroup_geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "affq/halfspin_reps.hpp"

namespace affq {

namespace {

double eps3(int a, int b, int c) { return 0.5 * (a - b) * (b - c) * (c - a); }

double bound_for(RotContext ctx) { return ctx == RotContext::SO3 ? pi : two_pi; }

}  // namespace

RotationVector::RotationVector(const Vec3& kv, RotContext ctx) : k(kv), context(ctx) {
  if (!kv.allFinite() || kv.norm() > bound_for(ctx) * (1.0 + 1e-12))
    throw ValidationError("rotation vector outside the parameter ball");
}

Mat3 so3_from_rotation_vector(const Vec3& k) {
  const double kn = k.norm();
  if (kn > pi * (1.0 + 1e-12)) throw ValidationError("SO(3) rotation vector magnitude exceeds pi");
  double sinc, cosc;  // sin k/k, (1 - cos k)/k^2
  if (kn < 1e-6) {
    sinc = 1.0 - kn * kn / 6.0;
    cosc = 0.5 - kn * kn / 24.0;
  } else {
    sinc = std::sin(kn) / kn;
    cosc = (1.0 - std::cos(kn)) / (kn * kn);
  }
  Mat3 K;
  K << 0, -k[2], k[1], k[2], 0, -k[0], -k[1], k[0], 0;
  return std::cos(kn) * Mat3::Identity() + cosc * (k * k.transpose()) + sinc * K;
}

Vec3 rotation_series_apply(const Vec3& k, const Vec3& u, int terms) {
  if (terms < 1) throw ValidationError("series needs at least one term");
  Vec3 sum = u, term = u;
  for (int j = 1; j <= terms; ++j) {
    term = k.cross(term) / double(j);
    sum += term;
  }
  return sum;
}

Mat3 covering_projection(const Mat2c& u) {
  require_su2(u);
  const auto sg = pauli_matrices();
  Mat3 R;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) R(a, b) = 0.5 * (sg[a] * u * sg[b] * u.adjoint()).trace().real();
  return R;
}

double haar_weight_radial(double k) {
  k = std::abs(k);
  if (k < 1e-6) return 1.0 - k * k / 12.0;
  double s = std::sin(0.5 * k);
  return 4.0 * s * s / (k * k);
}

double haar_weight(const Vec3& k) { return haar_weight_radial(k.norm()); }

double half_cot_factor(double k) {
  k = std::abs(k);
  if (k < 1e-6) return 1.0 - k * k / 12.0 - k * k * k * k / 720.0;
  return 0.5 * k / std::tan(0.5 * k);
}

Mat3 killing_metric(const Vec3& k) {
  const double kn = k.norm();
  if (kn >= two_pi * (1.0 - 1e-12)) throw ValidationError("metric is degenerate at |k| = 2 pi");
  if (kn == 0.0) return Mat3::Identity();
  const double lam = haar_weight_radial(kn);
  return lam * Mat3::Identity() + (1.0 - lam) * (k * k.transpose()) / (kn * kn);
}

Vec3 conformal_coordinates(const Vec3& k, double a) {
  if (!(a > 0)) throw ValidationError("conformal scale must be positive");
  const double kn = k.norm();
  if (kn >= two_pi) throw ValidationError("conformal coordinates need |k| < 2 pi");
  double f = kn < 1e-6 ? 0.25 + kn * kn / 192.0 : std::tan(0.25 * kn) / kn;
  return a * f * k;
}

Vec3 conformal_inverse(const Vec3& r, double a) {
  const double rn = r.norm();
  if (rn < 1e-12 * a) return (4.0 / a) * r;
  return (4.0 * std::atan(rn / a) / rn) * r;
}

double conformal_residual(const Vec3& k, double a, double step) {
  const Vec3 r = conformal_coordinates(k, a);
  const double h = step * a;
  Mat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    J.col(j) = (conformal_inverse(r + e, a) - conformal_inverse(r - e, a)) / (2.0 * h);
  }
  Mat3 g = J.transpose() * killing_metric(k) * J;
  const double r2 = r.squaredNorm();
  const double F = 16.0 * a * a / ((a * a + r2) * (a * a + r2));
  return (g - F * Mat3::Identity()).norm() / F;
}

Mat3 rotation_generator_coefficients(const Vec3& k) {
  Mat3 D = Mat3::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) D(a, c) += eps3(a, b, c) * k[b];
  return D;
}

GeneratorCoefficients generator_coefficients(const Vec3& k) {
  const double kn = k.norm();
  if (kn >= two_pi * (1.0 - 1e-12)) throw ValidationError("generators are singular at |k| = 2 pi");
  const double c = half_cot_factor(kn);
  Mat3 sym = c * Mat3::Identity();
  if (kn > 0) sym += (1.0 - c) * (k * k.transpose()) / (kn * kn);
  const Mat3 D = rotation_generator_coefficients(k);
  return {k, sym + 0.5 * D, sym - 0.5 * D};
}

std::vector<double> radial_grid(int points) {
  std::vector<double> k(points);
  const double h = two_pi / (points + 1);
  for (int i = 0; i < points; ++i) k[i] = (i + 1) * h;
  return k;
}

std::vector<double> radial_casimir_apply(const std::vector<double>& f) {
  const int N = static_cast<int>(f.size());
  if (N < 5) throw ValidationError("radial Casimir needs at least 5 grid points");
  const double h = two_pi / (N + 1);
  const auto k = radial_grid(N);
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    double d1, d2;
    if (i == 0) {
      d1 = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
      d2 = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
    } else if (i == N - 1) {
      d1 = (3 * f[i] - 4 * f[i - 1] + f[i - 2]) / (2 * h);
      d2 = (2 * f[i] - 5 * f[i - 1] + 4 * f[i - 2] - f[i - 3]) / (h * h);
    } else {
      d1 = (f[i + 1] - f[i - 1]) / (2 * h);
      d2 = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
    }
    out[i] = d2 + d1 / std::tan(0.5 * k[i]);
  }
  return out;
}

double radial_casimir_eigenvalue(const std::vector<double>& f) {
  const auto cf = radial_casimir_apply(f);
  const auto k = radial_grid(static_cast<int>(f.size()));
  double num = 0, den = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = std::sin(0.5 * k[i]);
    num += s * s * f[i] * cf[i];
    den += s * s * f[i] * f[i];
  }
  return num / den;
}

double character(SpinLabel s, double k) {
  double sh = std::sin(0.5 * k);
  if (std::abs(sh) < 1e-12) return s.dim() * (std::cos(0.5 * k) > 0 ? 1.0 : (s.half_integer() ? -1.0 : 1.0));
  return std::sin(0.5 * s.dim() * k) / sh;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  RVec diag = RVec::Zero(n), sub(std::max(n - 1, 0));
  for (int i = 1; i < n; ++i) sub[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<RMat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (b - a) * es.eigenvalues()[i] + 0.5 * (a + b);
    double v = es.eigenvectors()(0, i);
    w[i] = (b - a) * v * v;
  }
  return {x, w};
}

HaarQuadrature su2_haar_quadrature(int level) {
  if (level < 2) throw ValidationError("quadrature level must be at least 2");
  auto [kx, kw] = gauss_legendre(level, 0.0, two_pi);
  auto [tx, tw] = gauss_legendre(level, 0.0, pi);
  auto [px, pw] = gauss_legendre(level, 0.0, two_pi);
  HaarQuadrature q;
  q.nodes.reserve(std::size_t(level) * level * level);
  q.weights.reserve(q.nodes.capacity());
  double total = 0;
  for (int i = 0; i < level; ++i) {
    double s = std::sin(0.5 * kx[i]);
    for (int j = 0; j < level; ++j)
      for (int l = 0; l < level; ++l) {
        double w = kw[i] * tw[j] * pw[l] * 4.0 * s * s * std::sin(tx[j]);
        q.nodes.push_back(kx[i] * Vec3(std::sin(tx[j]) * std::cos(px[l]), std::sin(tx[j]) * std::sin(px[l]),
                                       std::cos(tx[j])));
        q.weights.push_back(w);
        total += w;
      }
  }
  for (auto& w : q.weights) w /= total;
  return q;
}

namespace {

double orthogonality_residual(int level) {
  const auto quad = su2_haar_quadrature(level);
  double worst = 0;
  for (int ta = 0; ta <= 4; ++ta)
    for (int tb = ta; tb <= 4; ++tb) {
      const auto sa = build_spin_matrices(SpinLabel(ta)), sb = build_spin_matrices(SpinLabel(tb));
      const int da = ta + 1, db = tb + 1;
      CMat G = CMat::Zero(da * da, db * db);
      for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        const CMat A = wigner_d(sa, quad.nodes[i]), B = wigner_d(sb, quad.nodes[i]);
        const Eigen::Map<const Eigen::VectorXcd> va(A.data(), A.size()), vb(B.data(), B.size());
        G.noalias() += quad.weights[i] * va.conjugate() * vb.transpose();
      }
      if (ta == tb) G -= CMat::Identity(da * da, db * db) / double(da);
      worst = std::max(worst, G.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

std::vector<InvariantCheck> geometry_invariant_suite(std::uint64_t seed, int samples, int level) {
  if (samples < 1) throw ValidationError("at least one sample required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  double hom = 0, even = 0, det = 0, inner = 0;
  for (int t = 0; t < samples; ++t) {
    const Mat2c u = random_su2(rng), v = random_su2(rng);
    const Mat3 Ru = covering_projection(u);
    hom = std::max(hom, (covering_projection(u * v) - Ru * covering_projection(v)).norm());
    even = std::max(even, (Ru - covering_projection(-u)).norm());
    const double k = 0.1 + unit(rng) * (two_pi - 0.2);
    const Vec3 kv = k * Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
    det = std::max(det, std::abs(std::sqrt(killing_metric(kv).determinant()) - haar_weight(kv)) / haar_weight(kv));
    const Vec3 small = 0.5 * unit(rng) * Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
    const Vec3 moved = rotation_vector_from_su2(v * su2_from_rotation_vector(small) * v.adjoint());
    inner = std::max(inner, (covering_projection(v) * small - moved).norm());
  }
  const double floor = 1e-12;
  std::vector<InvariantCheck> out{
      {"tau_homomorphism", hom, 1e-10, hom <= 1e-10},
      {"tau_even", even, 1e-12, even <= 1e-12},
      {"sqrt_det_metric_vs_haar", det, 1e-10, det <= 1e-10},
      {"inner_automorphism", inner, 1e-8, inner <= 1e-8},
  };
  double coarse = orthogonality_residual(level);
  for (int l = level; 2 * l <= std::max(2 * level, 32); l *= 2) {
    const double fine = orthogonality_residual(2 * l);
    const double tol = std::max(coarse / 4.0, floor);
    out.push_back({"quadrature_orthogonality_level_" + std::to_string(l) + "_to_" + std::to_string(2 * l), fine, tol,
                   fine <= tol});
    coarse = fine;
  }
  return out;
}

}  // namespace affq
