#include <doctest.h>

#include <sstream>

#include "affq/io.hpp"

using namespace affq;

TEST_CASE("12 significant digits") {
  CHECK(fmt12(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt12(2.0) == "2");
  CHECK(fmt12(-1234567.891234567) == "-1234567.89123");
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("spectrum CSV carries the config and a fixed header") {
  Spectrum s;
  s.eigenvalues = {0.5, 1.5};
  s.residuals = {1e-12, 2e-12};
  ojson meta;
  meta["config"] = {{"seed", 7}};
  std::ostringstream os;
  write_spectrum_csv(os, s, meta);
  CHECK(os.str() == "# {\"config\":{\"seed\":7}}\nlevel,energy,residual\n0,0.5,1e-12\n1,1.5,2e-12\n");
}

TEST_CASE("spectrum JSON key order is stable") {
  Spectrum s;
  s.eigenvalues = {1.0};
  s.residuals = {0.0};
  s.method = "dense";
  s.dim = 3;
  const ojson j = spectrum_json(s);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"method", "dim", "iterations", "seed", "converged", "eigenvalues", "residuals"});
}

TEST_CASE("coordinate-list round trip") {
  std::vector<Eigen::Triplet<double>> t{{0, 0, 2.0}, {0, 1, -1.0 / 3.0}, {1, 0, -1.0 / 3.0}, {2, 2, 1e-300}};
  Eigen::SparseMatrix<double> H(3, 3);
  H.setFromTriplets(t.begin(), t.end());
  std::stringstream ss;
  write_coo(ss, H, ojson{{"kind", "test"}});
  const auto G = read_coo(ss);
  CHECK(G.rows() == 3);
  CHECK(G.nonZeros() == 4);
  CHECK((RMat(G) - RMat(H)).norm() == 0.0);
  std::stringstream bad("2 2 1\n0 5 1.0\n");
  CHECK_THROWS_AS(read_coo(bad), ValidationError);
  std::stringstream short_list("2 2 2\n0 0 1.0\n");
  CHECK_THROWS_AS(read_coo(short_list), ValidationError);
}

TEST_CASE("potential specs") {
  CHECK(parse_potential("none").invariant() == nullptr);
  const auto h = parse_potential("harmonic:kappa=2");
  RVec q(2);
  q << 1.0, 3.0;
  CHECK(h.invariant()(q) == doctest::Approx(10.0));
  // harmonic splits into kappa q^2 + kappa x^2 / 4 with q the mean and x the difference
  CHECK(h.dilatational(2.0) + h.shear(2.0) == doctest::Approx(10.0));
  const auto d = parse_potential("dilatational:kappa=1");
  CHECK(d.invariant()(q) == doctest::Approx(2.0));
  CHECK(d.str() == "dilatational:kappa=1");
  CHECK_THROWS_AS(parse_potential("quartic:kappa=1"), ValidationError);
  CHECK_THROWS_AS(parse_potential("harmonic"), ValidationError);
  CHECK_THROWS_AS(parse_potential("harmonic:kappa=-1"), ValidationError);
  CHECK_THROWS_AS(parse_potential("harmonic:kappa=1x"), ValidationError);
}

TEST_CASE("grid strings") {
  const auto g = parse_grid("-2:2:10,0:6.5:20", 0.25);
  CHECK(g.dims() == 2);
  CHECK(g.offset == 0.25);
  CHECK(g.axes[1].max == 6.5);
  CHECK(grid_to_string(g) == "-2:2:10,0:6.5:20");
  CHECK(grid_json(g)["axes"][1]["points"] == 20);
  CHECK_THROWS_AS(parse_grid("0:1"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1:2.5"), ValidationError);
  CHECK_THROWS_AS(parse_grid("1:0:10"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1:3"), ValidationError);
}

TEST_CASE("convergence report JSON") {
  ConvergenceReport r;
  r.rows = {{100, 1.0, {0.5}}, {200, 1.0, {0.50001}}};
  r.extrapolated = {0.5};
  r.observed_order = {std::nan("")};
  r.box_change = {1e-9};
  const ojson j = convergence_json(r);
  CHECK(j["rows"].size() == 2);
  CHECK(j["observed_order"][0].is_null());
}
