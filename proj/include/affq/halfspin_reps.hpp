#pragma once

#include <array>
#include <random>

#include "affq/core.hpp"

namespace affq {

struct SpinMatrices {
  SpinLabel s;
  std::array<CMat, 3> S;  // units of hbar
};

SpinMatrices build_spin_matrices(SpinLabel s);

std::array<Mat2c, 3> pauli_matrices();

// u(k) = cos(k/2) I - i sin(k/2) khat.sigma, |k| <= 2 pi
Mat2c su2_from_rotation_vector(const Vec3& k);

// inverse map; |k| in [0, 2pi]; -I maps to (0,0,2pi)
Vec3 rotation_vector_from_su2(const Mat2c& u);

void require_su2(const Mat2c& u, double tol = 1e-10);

// exp(-i k.S), unitary diagonalisation of the Hermitian k.S
CMat wigner_d(const SpinMatrices& sm, const Vec3& k);
CMat wigner_d(SpinLabel s, const Mat2c& u);

// rho with D(-u) = rho D(u); throws if no scalar relation holds
int parity_factor(SpinLabel s, const Mat2c& u, double tol = 1e-10);

// Haar-distributed SU(2) element (unit quaternion)
Mat2c random_su2(std::mt19937_64& rng);

}  // namespace affq
