#include <doctest.h>

#include <random>

#include "affq/halfspin_reps.hpp"

using namespace affq;

namespace {
const cplx I1(0.0, 1.0);
}

TEST_CASE("spin label parsing keeps 2s exact") {
  CHECK(parse_spin("1/2").twice == 1);
  CHECK(parse_spin("3/2").twice == 3);
  CHECK(parse_spin("1").twice == 2);
  CHECK(parse_spin("0.5").twice == 1);
  CHECK(parse_spin("1/2").half_integer());
  CHECK_FALSE(parse_spin("2").half_integer());
  CHECK_THROWS_AS(parse_spin("1/3"), ValidationError);
  CHECK_THROWS_AS(parse_spin("-1"), ValidationError);
  CHECK_THROWS_AS(parse_spin("x"), ValidationError);
  CHECK(SpinLabel(3).str() == "3/2");
}

TEST_CASE("spin zero gives three 1x1 zero matrices") {
  const auto sm = build_spin_matrices(SpinLabel(0));
  for (const auto& S : sm.S) {
    CHECK(S.rows() == 1);
    CHECK(std::abs(S(0, 0)) == 0.0);
  }
}

TEST_CASE("spin 1/2 matrices are half the Pauli matrices") {
  const auto sm = build_spin_matrices(SpinLabel(1));
  const auto p = pauli_matrices();
  for (int a = 0; a < 3; ++a) CHECK((sm.S[a] - 0.5 * CMat(p[a])).norm() <= 1e-15);
}

TEST_CASE("spin 1: S3 diagonal and Casimir 2") {
  const auto sm = build_spin_matrices(SpinLabel(2));
  CMat d = CMat::Zero(3, 3);
  d(0, 0) = 1;
  d(2, 2) = -1;
  CHECK((sm.S[2] - d).norm() <= 1e-15);
  const CMat cas = sm.S[0] * sm.S[0] + sm.S[1] * sm.S[1] + sm.S[2] * sm.S[2];
  CHECK((cas - 2.0 * CMat::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("commutator and Casimir invariants up to 2s = 25") {
  for (int tw = 0; tw <= 25; ++tw) {
    const auto sm = build_spin_matrices(SpinLabel(tw));
    const CMat comm = sm.S[0] * sm.S[1] - sm.S[1] * sm.S[0];
    const double scale = std::max(1.0, sm.S[0].norm() * sm.S[1].norm());
    CHECK((comm - I1 * sm.S[2]).norm() <= 1e-10 * scale);
    const CMat cas = sm.S[0] * sm.S[0] + sm.S[1] * sm.S[1] + sm.S[2] * sm.S[2];
    const double c = SpinLabel(tw).casimir();
    CHECK((cas - c * CMat::Identity(tw + 1, tw + 1)).norm() <= 1e-10 * std::max(c, 1.0) * (tw + 1));
  }
}

TEST_CASE("exponential map examples") {
  const auto p = pauli_matrices();
  CHECK((su2_from_rotation_vector(Vec3::Zero()) - Mat2c::Identity()).norm() <= 1e-15);
  CHECK((su2_from_rotation_vector(Vec3(0, 0, pi)) + I1 * p[2]).norm() <= 1e-15);
  const Vec3 dir = Vec3(1, -2, 0.5).normalized();
  CHECK((su2_from_rotation_vector(two_pi * dir) + Mat2c::Identity()).norm() <= 1e-14);
}

TEST_CASE("logarithm examples and round trip") {
  const auto p = pauli_matrices();
  CHECK(rotation_vector_from_su2(Mat2c::Identity()).norm() <= 1e-15);
  CHECK((rotation_vector_from_su2(Mat2c(-I1 * p[2])) - Vec3(0, 0, pi)).norm() <= 1e-12);
  CHECK((rotation_vector_from_su2(Mat2c(-Mat2c::Identity())) - Vec3(0, 0, two_pi)).norm() <= 1e-15);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Mat2c u = random_su2(rng);
    CHECK((su2_from_rotation_vector(rotation_vector_from_su2(u)) - u).norm() <= 1e-12);
  }
  CHECK((su2_from_rotation_vector(rotation_vector_from_su2(Mat2c(-Mat2c::Identity()))) + Mat2c::Identity()).norm() <=
        1e-14);
}

TEST_CASE("non-SU(2) input is rejected") {
  Mat2c m = Mat2c::Identity();
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(require_su2(m), ValidationError);
  CHECK_THROWS_AS(rotation_vector_from_su2(m), ValidationError);
}

TEST_CASE("Wigner D examples") {
  std::mt19937_64 rng(11);
  for (int tw = 0; tw <= 4; ++tw) {
    const SpinLabel s(tw);
    CHECK((wigner_d(s, Mat2c::Identity()) - CMat::Identity(tw + 1, tw + 1)).norm() <= 1e-14);
  }
  for (int t = 0; t < 20; ++t) {
    const Mat2c u = random_su2(rng);
    CHECK((wigner_d(SpinLabel(1), u) - CMat(u)).norm() <= 1e-12);
  }
  CHECK((wigner_d(SpinLabel(1), Mat2c(-Mat2c::Identity())) + CMat::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("representation law, parity and unitarity") {
  std::mt19937_64 rng(20240531);
  for (int t = 0; t < 100; ++t) {
    const Mat2c u = random_su2(rng), v = random_su2(rng);
    for (int tw = 0; tw <= 12; ++tw) {
      const SpinLabel s(tw);
      const CMat Du = wigner_d(s, u);
      CHECK((wigner_d(s, Mat2c(u * v)) - Du * wigner_d(s, v)).norm() <= 1e-9);
      CHECK((wigner_d(s, Mat2c(-u)) - (s.half_integer() ? -1.0 : 1.0) * Du).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((Du.adjoint() * Du - CMat::Identity(tw + 1, tw + 1)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("parity factor") {
  std::mt19937_64 rng(3);
  const Mat2c u = random_su2(rng);
  CHECK(parity_factor(SpinLabel(2), u) == 1);
  CHECK(parity_factor(SpinLabel(1), u) == -1);
  CHECK(parity_factor(SpinLabel(0), u) == 1);
}
