#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affq/core.hpp"

namespace affq {

enum class RotContext { SO3, SU2 };

struct RotationVector {
  Vec3 k = Vec3::Zero();
  RotContext context = RotContext::SU2;

  RotationVector() = default;
  RotationVector(const Vec3& kv, RotContext ctx);
};

struct GeneratorCoefficients {
  Vec3 k;
  Mat3 lambda;   // row a: coefficients of d/dk^b in Lambda_a
  Mat3 upsilon;  // row a: coefficients of d/dk^b in Upsilon_a
};

struct HaarQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

// W(k) u = cos k u + (1 - cos k)(k.u)k/k^2 + (sin k/k) k x u
Mat3 so3_from_rotation_vector(const Vec3& k);

Vec3 rotation_series_apply(const Vec3& k, const Vec3& u, int terms);

// R_ab = Re tr(sigma_a u sigma_b u^dagger) / 2
Mat3 covering_projection(const Mat2c& u);

Mat3 killing_metric(const Vec3& k);

// (4/k^2) sin^2(k/2)
double haar_weight(const Vec3& k);
double haar_weight_radial(double k);

// (k/2) cot(k/2)
double half_cot_factor(double k);

Vec3 conformal_coordinates(const Vec3& k, double a);
Vec3 conformal_inverse(const Vec3& r, double a);
// relative defect of the pulled-back metric against 16 a^2/(a^2+r^2)^2 times the flat metric
double conformal_residual(const Vec3& k, double a, double step = 1e-5);

GeneratorCoefficients generator_coefficients(const Vec3& k);
// row a: coefficients of d/dk^c in D_a = eps_abc k^b d/dk^c
Mat3 rotation_generator_coefficients(const Vec3& k);

// open uniform grid k_i = (i+1) 2pi/(N+1)
std::vector<double> radial_grid(int points);
std::vector<double> radial_casimir_apply(const std::vector<double>& f);
// Haar-weighted Rayleigh quotient <f, C f> / <f, f>
double radial_casimir_eigenvalue(const std::vector<double>& f);
double character(SpinLabel s, double k);

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);
HaarQuadrature su2_haar_quadrature(int level);

struct InvariantCheck {
  std::string check;
  double residual = 0, tolerance = 0;
  bool pass = false;
};

// homomorphism and evenness of tau, metric-measure compatibility, inner automorphisms on `samples`
// pseudo-random elements; quadrature orthogonality (s <= 2) over the doublings level, 2 level, ... up to 32,
// each required to cut the residual 4x or reach the rounding floor 1e-12
std::vector<InvariantCheck> geometry_invariant_suite(std::uint64_t seed, int samples = 100, int level = 8);

}  // namespace affq
