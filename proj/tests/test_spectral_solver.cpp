#include <doctest.h>

#include <random>

#include "affq/planar_models.hpp"
#include "affq/spectral_solver.hpp"

using namespace affq;

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// c (-d^2/dx^2) + v(x) on n interior nodes of (a, b), Dirichlet at the ends
SpMat chain(int n, double a, double b, double c, const std::function<double(double)>& v) {
  const double h = (b - a) / (n + 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2 * c / (h * h) + (v ? v(a + (i + 1) * h) : 0.0));
    if (i > 0) t.emplace_back(i, i - 1, -c / (h * h));
    if (i + 1 < n) t.emplace_back(i, i + 1, -c / (h * h));
  }
  SpMat H(n, n);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

// 2D harmonic oscillator, not tridiagonal
SpMat oscillator2(int n, double L) {
  const double h = 2 * L / (n + 1);
  std::vector<Eigen::Triplet<double>> t;
  auto id = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -L + (i + 1) * h, y = -L + (j + 1) * h;
      t.emplace_back(id(i, j), id(i, j), 2.0 / (h * h) + 0.5 * (x * x + y * y));
      if (i > 0) t.emplace_back(id(i, j), id(i - 1, j), -0.5 / (h * h));
      if (i + 1 < n) t.emplace_back(id(i, j), id(i + 1, j), -0.5 / (h * h));
      if (j > 0) t.emplace_back(id(i, j), id(i, j - 1), -0.5 / (h * h));
      if (j + 1 < n) t.emplace_back(id(i, j), id(i, j + 1), -0.5 / (h * h));
    }
  SpMat H(n * n, n * n);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

}  // namespace

TEST_CASE("sine spectrum on (0, pi)") {
  const auto s = solve_lowest(chain(2048, 0.0, pi, 1.0, nullptr), 3);
  CHECK(s.method == "tridiagonal");
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(s.eigenvalues[k - 1] - k * k) <= 1e-4 * k * k);
  for (double r : s.residuals) CHECK(r <= 1e-8);
}

TEST_CASE("dense and iterative solvers agree on a 500-dimensional operator") {
  const SpMat H = chain(500, -8.0, 8.0, 0.5, [](double x) { return 0.5 * x * x + 0.1 * std::sin(3 * x); });
  SolverOptions dense, lanczos;
  dense.method = Method::Dense;
  lanczos.method = Method::Lanczos;
  const auto a = solve_lowest(H, 6, dense), b = solve_lowest(H, 6, lanczos);
  CHECK(a.method == "dense");
  CHECK(b.method == "lanczos");
  CHECK(b.converged);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-8);
}

TEST_CASE("Lanczos resolves degenerate levels; shift-invert agrees") {
  const SpMat H = oscillator2(80, 7.0);
  SolverOptions lz, si;
  lz.method = si.method = Method::Lanczos;
  si.shift_invert = true;
  const auto a = solve_lowest(H, 6, lz), b = solve_lowest(H, 6, si);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(b.method == "lanczos-shift-invert");
  CHECK(b.sigma < b.eigenvalues[0]);
  // levels 1, 2, 2, 3, 3, 3 up to discretisation error
  const double expect[6] = {1, 2, 2, 3, 3, 3};
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-7);
    CHECK(std::abs(a.eigenvalues[i] - expect[i]) <= 2e-2);
  }
  CHECK(std::abs(a.eigenvalues[1] - a.eigenvalues[2]) <= 1e-8);
}

TEST_CASE("solver runs are deterministic") {
  const SpMat H = oscillator2(40, 6.0);
  SolverOptions opt;
  opt.method = Method::Lanczos;
  const auto a = solve_lowest(H, 4, opt), b = solve_lowest(H, 4, opt);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.residuals == b.residuals);
  CHECK(a.iterations == b.iterations);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("iteration cap is reported as non-convergence") {
  SolverOptions opt;
  opt.method = Method::Lanczos;
  opt.max_iterations = 5;
  const auto s = solve_lowest(oscillator2(40, 6.0), 4, opt);
  CHECK_FALSE(s.converged);
}

TEST_CASE("bad requests are rejected") {
  const SpMat H = chain(10, 0, 1, 1, nullptr);
  CHECK_THROWS_AS(solve_lowest(H, 0), ValidationError);
  CHECK_THROWS_AS(solve_lowest(H, 11), ValidationError);
  SolverOptions tri;
  tri.method = Method::Tridiagonal;
  CHECK_THROWS_AS(solve_lowest(oscillator2(5, 1.0), 2, tri), ValidationError);
  CHECK(parse_method("lanczos") == Method::Lanczos);
  CHECK_THROWS_AS(parse_method("arnoldi"), ValidationError);
}

TEST_CASE("matrix-free Lanczos") {
  const int n = 300;
  RVec d(n);
  for (int i = 0; i < n; ++i) d[i] = 1.0 + 0.01 * ((i * 37) % n);
  const ApplyFn apply = [&d](const RVec& x, RVec& y) { y = d.cwiseProduct(x); };
  const auto s = lanczos_lowest(apply, n, 3, SolverOptions{});
  REQUIRE(s.converged);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.00).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(s.eigenvalues[2] == doctest::Approx(1.02).epsilon(1e-12));
}

TEST_CASE("weighted inner product of eigen-amplitudes") {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  Axis x{0.0, 12.0, 400};
  const auto op = planar_x_operator(ModelKind::AffAff, p, PlanarSector{1, 2}, x, [](double v) { return 0.25 * v * v; });
  const auto s = solve_lowest(op, 3);
  const RVec w = full_weight(op);
  const double vol = op.cell_volume();
  const auto f0 = amplitude_from_vector(op, s.vectors.col(0)), f1 = amplitude_from_vector(op, s.vectors.col(1));
  CHECK(std::abs(weighted_inner_product(f0, f0, w, vol) * (1.0 / vol) - 1.0) <= 1e-10);
  CHECK(std::abs(weighted_inner_product(f0, f1, w, vol)) <= 1e-8);
}

TEST_CASE("Richardson and observed order on synthetic sequences") {
  auto e = [](double h) { return 3.0 + 0.7 * h * h - 0.2 * h * h * h; };
  const std::vector<double> v{e(0.4), e(0.2), e(0.1)};
  CHECK(richardson(v, 2.0, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  auto f = [](double h) { return 1.0 + h * h; };
  CHECK(observed_order(f(0.4), f(0.2), f(0.1), 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isnan(observed_order(1.0, 2.0, 1.0, 2.0)));
}

TEST_CASE("harmonic oscillator convergence study has observed order near 2") {
  const OperatorFactory factory = [](int res, double box) {
    return chain(res, -6.0 * box, 6.0 * box, 0.5, [](double x) { return 0.5 * x * x; });
  };
  const auto rep = convergence_study(factory, {100, 200, 400}, {1.0, 2.0}, 3);
  REQUIRE(rep.rows.size() == 4);
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.observed_order[k] == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.extrapolated[k] == doctest::Approx(k + 0.5).epsilon(1e-5));
  }
  CHECK(rep.box_change[0] >= 0.0);
}
