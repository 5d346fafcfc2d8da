#include <doctest.h>

#include <algorithm>

#include "affq/planar_models.hpp"

using namespace affq;

namespace {

InertialParams params(double I, double A, double B) {
  InertialParams p;
  p.n = 2;
  p.I = I;
  p.A = A;
  p.B = B;
  return p;
}

double lowest_x(ModelKind k, const InertialParams& p, PlanarSector s, double L) {
  const auto op = planar_x_operator(k, p, s, Axis{0.0, L, static_cast<int>(100 * L)}, nullptr);
  return solve_lowest(op, 1).eigenvalues[0];
}

}  // namespace

TEST_CASE("planar coordinates and momenta") {
  const auto [q, x] = planar_coordinates(0.4, 0.4);
  CHECK(q == doctest::Approx(0.4));
  CHECK(x == 0.0);
  const auto [q1, q2] = planar_inverse(0.0, 1.0);
  CHECK(q1 == doctest::Approx(-0.5));
  CHECK(q2 == doctest::Approx(0.5));
  const auto [p, px] = planar_momenta(0.3, -1.1);
  const auto [p1, p2] = planar_momenta_inverse(p, px);
  CHECK(p1 == doctest::Approx(0.3));
  CHECK(p2 == doctest::Approx(-1.1));
}

TEST_CASE("classical kinetic energies") {
  const auto pr = params(2, 1, 0.5);
  CHECK(classical_kinetic(ModelKind::AffAff, pr, PlanarState{}) == 0.0);
  PlanarState s{0.2, 0.9, 0.7, -0.4, 1.3, 1.3};
  const double ch = std::cosh(0.45);
  const double expect = 0.49 / (4 * 2.0) + 0.16 / 1.0 - (2.6 * 2.6) / (16.0 * ch * ch);
  CHECK(classical_kinetic(ModelKind::AffAff, pr, s) == doctest::Approx(expect).epsilon(1e-14));
  PlanarState a{0.2, 0.9, 0.7, -0.4, 1.1, 0.0}, b{0.2, 0.9, 0.7, -0.4, 0.0, 1.1};
  CHECK(classical_kinetic(ModelKind::MetAff, pr, a) == doctest::Approx(classical_kinetic(ModelKind::AffMet, pr, b)));
}

TEST_CASE("q-operator coefficient and harmonic dilatation gaps") {
  const auto p = params(0, 1, 0.5);
  const auto po = planar_quantum_operators(ModelKind::AffAff, p, {0, 0}, Axis{-6.0, 6.0, 2048}, Axis{0.0, 10.0, 64},
                                           [](double q) { return 0.5 * q * q; }, nullptr);
  CHECK(po.q_coefficient == doctest::Approx(1.0 / (4.0 * (p.A + 2.0 * p.B))).epsilon(1e-15));
  const auto sp = solve_lowest(po.q_op, 6);
  const double gap = std::sqrt(1.0 / (2.0 * (p.A + 2.0 * p.B)));
  for (int i = 1; i < 6; ++i) CHECK(std::abs(sp.eigenvalues[i] - sp.eigenvalues[i - 1] - gap) <= 1e-4 * gap);
}

TEST_CASE("sector (0,0) x-operator is -(1/A) D_x without potential") {
  const Axis x{0.0, 10.0, 200};
  const auto h1 = planar_x_operator(ModelKind::AffAff, params(0, 1, 0.5), {0, 0}, x, nullptr);
  const auto h2 = planar_x_operator(ModelKind::AffAff, params(0, 2, 0.5), {0, 0}, x, nullptr);
  CHECK((RMat(h1.H) - 2.0 * RMat(h2.H)).norm() <= 1e-12 * RMat(h1.H).norm());
}

TEST_CASE("U(2) sector (0,0): Legendre spectrum") {
  const auto op = planar_x_operator(ModelKind::UnitaryGroup, params(0, 1, 0), {0, 0}, Axis{0.0, pi, 2048}, nullptr);
  const auto sp = solve_lowest(op, 5);
  for (int l = 0; l <= 4; ++l) CHECK(std::abs(sp.eigenvalues[l] - l * (l + 1)) <= 1e-3 * std::max(1, l * (l + 1)));
}

TEST_CASE("discreteness classification") {
  CHECK(discreteness_criterion({1, 2}) == Discreteness::Discrete);
  CHECK(discreteness_criterion({-1, 2}) == Discreteness::Continuous);
  CHECK(discreteness_criterion({0, 0}) == Discreteness::Marginal);
  CHECK(discreteness_criterion({0, 2}) == Discreteness::Marginal);
  CHECK(to_string(Discreteness::Continuous) == "continuous");
}

TEST_CASE("bound sector (3,4) is box-stable; continuous sector approaches 1/(4A) from above") {
  const auto p = params(0, 1, 0.5);
  const double b20 = lowest_x(ModelKind::AffAff, p, {3, 4}, 20), b40 = lowest_x(ModelKind::AffAff, p, {3, 4}, 40);
  CHECK(b40 < 0.0);
  CHECK(std::abs(b40 - b20) <= 1e-6);
  CHECK(b40 == doctest::Approx(-0.75).epsilon(1e-3));
  const double c20 = lowest_x(ModelKind::AffAff, p, {-1, 2}, 20), c40 = lowest_x(ModelKind::AffAff, p, {-1, 2}, 40);
  CHECK(c40 < c20);
  CHECK(c40 > 0.25);
}

TEST_CASE("separability: full planar spectrum equals sums of q and x levels") {
  const auto p = params(0, 1, 0.5);
  const PlanarSector sec{1, 2};
  const Axis qa{-4.0, 4.0, 40}, xa{0.0, 8.0, 40};
  const auto po = planar_quantum_operators(
      ModelKind::AffAff, p, sec, qa, xa, [](double q) { return q * q; }, [](double x) { return 0.25 * x * x; });
  const auto sq = solve_lowest(po.q_op, 6), sx = solve_lowest(po.x_op, 6);
  std::vector<double> sums;
  for (double a : sq.eigenvalues)
    for (double b : sx.eigenvalues) sums.push_back(a + b);
  std::sort(sums.begin(), sums.end());

  GridSpec g;
  g.axes = {qa, xa};
  const auto full = assemble(ModelKind::AffAff, p, sec.label(), g, [](const RVec& q) { return 0.5 * q.squaredNorm(); },
                             {Chart::Planar, Scheme::Auto});
  SolverOptions dense;
  dense.method = Method::Dense;
  const auto sf = solve_lowest(full, 6, dense);
  for (int i = 0; i < 6; ++i) CHECK(sf.eigenvalues[i] == doctest::Approx(sums[i]).epsilon(1e-9));
}

TEST_CASE("geodetic scan: AffAff unbounded below, MetAff bounded") {
  const Axis x{0.0, 12.0, 600};
  const auto aff3 = geodetic_scan(ModelKind::AffAff, params(0, 1, 0.5), 3, x);
  const auto aff6 = geodetic_scan(ModelKind::AffAff, params(0, 1, 0.5), 6, x);
  CHECK(aff6.entries.size() == 13 * 13);
  CHECK(aff6.minimum.lowest < aff3.minimum.lowest - 1.0);
  const auto met3 = geodetic_scan(ModelKind::MetAff, params(2, 1, 0.5), 3, x);
  const auto met6 = geodetic_scan(ModelKind::MetAff, params(2, 1, 0.5), 6, x);
  CHECK(met6.minimum.lowest == doctest::Approx(met3.minimum.lowest).epsilon(1e-9));
}

TEST_CASE("d'Alembert operator depends on m^2 and n^2 only") {
  GridSpec g;
  g.axes = {Axis{0.0, 4.0, 20}, Axis{0.0, 4.0, 20}};
  const auto p = params(1, 1, 0);
  auto V = [](const RVec& q) { return 0.5 * q.squaredNorm(); };
  const auto a = dalembert_planar(p, {1, 2}, g, V), b = dalembert_planar(p, {-1, -2}, g, V);
  CHECK((RMat(a.H) - RMat(b.H)).norm() == 0.0);
  CHECK(symmetry_defect(a.H) <= 1e-12);
}

TEST_CASE("rotated, polar and elliptic coordinates") {
  const auto c = coordinate_transforms(1.3, 1.3);
  CHECK(c.q_minus == 0.0);
  for (double Q1 : {0.3, 1.7, -2.2})
    for (double Q2 : {0.1, -0.9, 2.5}) {
      const auto t = coordinate_transforms(Q1, Q2);
      const auto [a1, a2] = rotated_inverse(t.q_plus, t.q_minus);
      CHECK(std::abs(a1 - Q1) + std::abs(a2 - Q2) <= 1e-14);
      const auto [r1, r2] = polar_inverse(t.r, t.phi);
      const auto [b1, b2] = rotated_inverse(r1, r2);
      CHECK(std::abs(b1 - Q1) + std::abs(b2 - Q2) <= 1e-13);
      const auto [rho, lam] = elliptic_coordinates(t.q_plus, t.q_minus);
      CHECK(rho == doctest::Approx(t.rho));
      CHECK(rho >= 0.0);
      CHECK(lam >= 0.0);
      CHECK(lam < two_pi);
      const auto [e1, e2] = elliptic_inverse(rho, lam);
      CHECK(std::abs(e1 - t.q_plus) + std::abs(e2 - t.q_minus) <= 1e-12);
    }
}
