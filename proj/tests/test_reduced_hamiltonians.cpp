#include <doctest.h>

#include <random>

#include "affq/reduced_hamiltonians.hpp"
#include "affq/spectral_solver.hpp"

using namespace affq;

namespace {

RVec vec(std::initializer_list<double> v) {
  RVec r(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) r[i++] = x;
  return r;
}

GridSpec box3(double half, int points) {
  GridSpec g;
  const double h = 2.0 * half / points;
  for (int d = 0; d < 3; ++d) g.axes.push_back(Axis{-half + d * h / 3.0, half + d * h / 3.0, points});
  return g;
}

GridSpec box2(double half, int points) {
  GridSpec g;
  const double h = 2.0 * half / points;
  g.axes = {Axis{-half, half, points}, Axis{-half + 0.5 * h, half + 0.5 * h, points}};
  return g;
}

InertialParams params(int n, double I, double A, double B) {
  InertialParams p;
  p.n = n;
  p.I = I;
  p.A = A;
  p.B = B;
  return p;
}

double harmonic(const RVec& q) { return 0.5 * q.squaredNorm(); }

}  // namespace

TEST_CASE("names round trip") {
  for (auto k : {ModelKind::AffAff, ModelKind::MetAff, ModelKind::AffMet, ModelKind::DAlembert, ModelKind::UnitaryGroup})
    CHECK(parse_kind(to_string(k)) == k);
  for (auto c : {Chart::Invariants, Chart::Planar, Chart::Rotated, Chart::Shear}) CHECK(parse_chart(to_string(c)) == c);
  CHECK_THROWS_AS(parse_kind("rigid"), ValidationError);
  CHECK_THROWS_AS(parse_scheme("spectral"), ValidationError);
}

TEST_CASE("sector labels enforce the half-ness rule") {
  CHECK_NOTHROW(SectorLabel::spinor(SpinLabel(1), SpinLabel(1)));
  CHECK_NOTHROW(SectorLabel::spinor(SpinLabel(1), SpinLabel(3)));
  CHECK_THROWS_AS(SectorLabel::spinor(SpinLabel(1), SpinLabel(2)), ValidationError);
  CHECK_THROWS_AS(SectorLabel::spinor(SpinLabel(0), SpinLabel(1)), ValidationError);
  CHECK(SectorLabel::spinor(SpinLabel(1), SpinLabel(3)).fiber_dim() == 8);
  CHECK(SectorLabel::spinor(SpinLabel(1), SpinLabel(1)).fermionic());
  CHECK(SectorLabel::planar(1, 2).fiber_dim() == 1);
}

TEST_CASE("inertial parameter validation") {
  CHECK_THROWS_AS(params(2, 1, 0, 0).validate(ModelKind::AffAff), ValidationError);
  CHECK_THROWS_AS(params(2, 1, 1, 0.5).validate(ModelKind::MetAff), ValidationError);  // I^2 = A^2
  CHECK_NOTHROW(params(2, 2, 1, 0.5).validate(ModelKind::MetAff));
  CHECK_THROWS_AS(params(2, 0, 1, 0).validate(ModelKind::DAlembert), ValidationError);
}

TEST_CASE("grid indexing and validation") {
  GridSpec g;
  g.axes = {Axis{0, 1, 5}, Axis{-1, 1, 7}};
  for (long i = 0; i < g.total_nodes(); ++i) CHECK(g.ravel(g.unravel(i)) == i);
  CHECK(g.coords(0)[1] == doctest::Approx(-1.0 + 0.5 * 2.0 / 7.0));
  g.axes[0].points = 4;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g.axes[0].points = 5;
  g.offset = 1.0;
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("weight factor examples") {
  CHECK(weight_factor(vec({0, std::log(2.0)}), ModelKind::AffAff) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(weight_factor(vec({0.3, 0.3}), ModelKind::AffAff) == 0.0);
  CHECK(weight_factor(vec({0.3, 0.3, -1.0}), ModelKind::MetAff) == 0.0);
  CHECK(weight_factor(vec({0.2, 0.2 + 0.5 * pi}), ModelKind::UnitaryGroup) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(weight_factor(vec({2.0, 1.0}), ModelKind::DAlembert) == doctest::Approx(3.0));
  CHECK(weight_factor(vec({1.0, -1.0}), ModelKind::DAlembert) == 0.0);
}

TEST_CASE("artificial potential matches differentiation of ln sqrt P") {
  // P = |sh x|, x = q2 - q1: sum_a [h'' + h'^2] = 2 (-1/(2 sh^2 x) + cth^2(x)/4)
  const double x = 1.0, c = 0.7;
  const double cth = std::cosh(x) / std::sinh(x), csch2 = 1.0 / (std::sinh(x) * std::sinh(x));
  const double expect = c * 2.0 * (-0.5 * csch2 + 0.25 * cth * cth);
  CHECK(artificial_potential(vec({0.0, x}), ModelKind::AffAff, c) == doctest::Approx(expect).epsilon(1e-12));

  // finite-difference cross-check in n = 3
  const RVec q = vec({0.9, 0.1, -0.6});
  const double h = 1e-4;
  auto lnsp = [](const RVec& p) { return 0.5 * std::log(weight_factor(p, ModelKind::AffAff)); };
  double fd = 0;
  for (int a = 0; a < 3; ++a) {
    RVec e = RVec::Zero(3);
    e[a] = h;
    const double d1 = (lnsp(q + e) - lnsp(q - e)) / (2 * h);
    const double d2 = (lnsp(q + e) - 2 * lnsp(q) + lnsp(q - e)) / (h * h);
    fd += d2 + d1 * d1;
  }
  CHECK(artificial_potential(q, ModelKind::AffAff, 1.0) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("spin actions on reduced amplitudes") {
  GridSpec g;
  g.axes = {Axis{0, 1, 5}};
  const SectorLabel sec = SectorLabel::spinor(SpinLabel(1), SpinLabel(1));
  ReducedAmplitude f(sec, g);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (auto& v : f.values) v = cplx(n(rng), n(rng));
  ReducedAmplitude id(sec, g);
  id.set(2, CMat::Identity(2, 2));
  CMat s3 = CMat::Zero(2, 2);
  s3(0, 0) = 0.5;
  s3(1, 1) = -0.5;
  CHECK((apply_left_spin(2, id).at(2) - s3).norm() <= 1e-15);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto lr = apply_left_spin(a, apply_right_spin(b, f));
      const auto rl = apply_right_spin(b, apply_left_spin(a, f));
      for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(lr.values[i] - rl.values[i]) <= 1e-14);
    }
  ReducedAmplitude z(SectorLabel::spinor(SpinLabel(0), SpinLabel(0)), g);
  for (auto& v : z.values) v = 1.0;
  for (const auto& v : apply_left_spin(0, z).values) CHECK(v == cplx(0.0));
  CHECK_THROWS_AS(apply_left_spin(3, f), ValidationError);
}

TEST_CASE("fiber coupling") {
  const auto p = params(3, 2, 1, 0.5);
  const RVec q = vec({0.8, 0.1, -0.5});
  CHECK(fiber_coupling(ModelKind::AffAff, SectorLabel::spinor(SpinLabel(0), SpinLabel(0)), q, p).norm() == 0.0);
  for (auto k : {ModelKind::AffAff, ModelKind::MetAff, ModelKind::DAlembert, ModelKind::UnitaryGroup}) {
    const RMat F = fiber_coupling(k, SectorLabel::spinor(SpinLabel(1), SpinLabel(3)), q, p);
    CHECK(F.rows() == 8);
    CHECK((F - F.transpose()).norm() <= 1e-14 * std::max(1.0, F.norm()));
  }
}

TEST_CASE("Casimir constants") {
  auto p = params(3, 2, std::sqrt(2.0), 0.5);  // mu = (I^2 - A^2)/I = 1
  CHECK(casimir_constant(ModelKind::MetAff, SectorLabel::spinor(SpinLabel(2), SpinLabel(0)), p) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(casimir_constant(ModelKind::AffMet, SectorLabel::spinor(SpinLabel(1), SpinLabel(1)), p) ==
        doctest::Approx(0.375).epsilon(1e-14));
  CHECK(casimir_constant(ModelKind::MetAff, SectorLabel::spinor(SpinLabel(0), SpinLabel(2)), p) == 0.0);
  CHECK(casimir_constant(ModelKind::AffAff, SectorLabel::spinor(SpinLabel(2), SpinLabel(2)), p) == 0.0);
  // n = 2: I m^2 / (I^2 - A^2) with m = 2, I = 2, A = 1
  CHECK(casimir_constant(ModelKind::MetAff, SectorLabel::planar(2, 1), params(2, 2, 1, 0.5)) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("assembled operators are symmetric") {
  const auto p3 = params(3, 2, 1, 0.5);
  for (auto k : {ModelKind::AffAff, ModelKind::MetAff, ModelKind::AffMet}) {
    const auto op = assemble(k, p3, SectorLabel::spinor(SpinLabel(1), SpinLabel(1)), box3(2.0, 6), harmonic);
    CHECK(symmetry_defect(op.H) <= 1e-12);
    CHECK(op.dim() == static_cast<int>(op.active.size()) * 4);
  }
  const auto op2 = assemble(ModelKind::AffAff, params(2, 2, 1, 0.5), SectorLabel::planar(1, 2), box2(3.0, 20), harmonic);
  CHECK(symmetry_defect(op2.H) <= 1e-12);
}

TEST_CASE("kinetic part couples distinct nodes only within one fiber component") {
  const auto op = assemble(ModelKind::AffAff, params(3, 2, 1, 0.5), SectorLabel::spinor(SpinLabel(1), SpinLabel(1)),
                           box3(2.0, 6), nullptr);
  const int fd = op.fiber_dim;
  for (int k = 0; k < op.H.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.H, k); it; ++it)
      if (it.row() / fd != it.col() / fd) CHECK(it.row() % fd == it.col() % fd);
}

TEST_CASE("coincident nodes are rejected") {
  GridSpec g;
  g.axes = {Axis{-1, 1, 10}, Axis{-1, 1, 10}};
  CHECK_THROWS_AS(assemble(ModelKind::AffAff, params(2, 2, 1, 0.5), SectorLabel::planar(0, 0), g, nullptr),
                  ValidationError);
}

TEST_CASE("zero-coupling limit: kinds agree for s = j = 0 at matched constants") {
  // MetAff and AffMet with I + A = 3 carry the AffAff mass coefficients of A = 3
  const auto sec = SectorLabel::spinor(SpinLabel(0), SpinLabel(0));
  const auto g = box3(2.0, 6);
  const auto ref = assemble(ModelKind::AffAff, params(3, 0, 3, 0.5), sec, g, harmonic);
  for (auto k : {ModelKind::MetAff, ModelKind::AffMet}) {
    const auto op = assemble(k, params(3, 2, 1, 0.5), sec, g, harmonic);
    CHECK(casimir_constant(k, sec, params(3, 2, 1, 0.5)) == 0.0);
    CHECK((RMat(op.H) - RMat(ref.H)).norm() <= 1e-12 * RMat(ref.H).norm());
  }
}

TEST_CASE("scaling all inertial constants by lambda divides the spectrum by lambda") {
  const double lambda = 2.5;
  SolverOptions dense;
  dense.method = Method::Dense;
  const auto sec = SectorLabel::spinor(SpinLabel(1), SpinLabel(1));
  const auto a = solve_lowest(assemble(ModelKind::MetAff, params(3, 2, 1, 0.5), sec, box3(2.0, 6), nullptr), 4, dense);
  const auto b = solve_lowest(
      assemble(ModelKind::MetAff, params(3, 2 * lambda, lambda, 0.5 * lambda), sec, box3(2.0, 6), nullptr), 4, dense);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(b.eigenvalues[i] * lambda - a.eigenvalues[i]) <= 1e-10 * std::abs(a.eigenvalues[i]));
}

TEST_CASE("sl constraint projection") {
  const auto g2 = sl_constraint_project(box2(3.0, 10), 2);
  CHECK(g2.dims() == 1);
  const auto g3 = sl_constraint_project(box3(3.0, 10), 3);
  REQUIRE(g3.dims() == 2);
  const RMat M = chart_matrix(Chart::Shear, 3);
  for (long i = 0; i < g3.total_nodes(); ++i) CHECK(std::abs((M * g3.coords(i)).sum()) <= 1e-14);
  CHECK_THROWS_AS(sl_constraint_project(box2(3.0, 10), 1), ValidationError);
}

TEST_CASE("charts") {
  const RMat P = chart_matrix(Chart::Planar, 2);
  const RVec q = P * vec({0.0, 1.0});
  CHECK(q[0] == doctest::Approx(-0.5));
  CHECK(q[1] == doctest::Approx(0.5));
  CHECK(chart_dims(Chart::Shear, 4) == 3);
  CHECK_THROWS_AS(chart_matrix(Chart::Rotated, 3), ValidationError);
}
