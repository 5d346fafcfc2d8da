#include "affq/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "affq/halfspin_reps.hpp"
#include "affq/peterweyl.hpp"
#include "affq/planar_models.hpp"
#include "affq/rotgroup_geometry.hpp"

namespace affq {

namespace {

double eps3(int a, int b, int c) { return 0.5 * (a - b) * (b - c) * (c - a); }

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

Vec3 random_ball(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec3 d(g(rng), g(rng), g(rng));
  return radius * std::cbrt(u(rng)) * d.normalized();
}

// staggered n = 3 box: shifted axes keep every node off the coincidence planes
GridSpec staggered_box(double half, int points) {
  GridSpec g;
  const double h = 2.0 * half / points;
  for (int d = 0; d < 3; ++d) g.axes.push_back(Axis{-half + d * h / 3.0, half + d * h / 3.0, points});
  return g;
}

double dilatational(const RVec& q) {
  const double s = q.mean();
  return 0.5 * s * s;
}

void spin_algebra(CriterionResult& r, std::uint64_t) {
  double worst_comm = 0, worst_cas = 0, worst_herm = 0;
  for (int tw = 0; tw <= 25; ++tw) {
    const SpinLabel s(tw);
    const auto sm = build_spin_matrices(s);
    const double scale = std::max(1.0, s.value());
    for (int a = 0; a < 3; ++a) {
      worst_herm = std::max(worst_herm, (sm.S[a] - sm.S[a].adjoint()).norm() / scale);
      for (int b = 0; b < 3; ++b) {
        CMat rhs = CMat::Zero(s.dim(), s.dim());
        for (int c = 0; c < 3; ++c) rhs += cplx(0.0, eps3(a, b, c)) * sm.S[c];
        const CMat comm = sm.S[a] * sm.S[b] - sm.S[b] * sm.S[a];
        worst_comm = std::max(worst_comm, (comm - rhs).norm() / (scale * std::sqrt(double(s.dim()))));
      }
    }
    const CMat cas = sm.S[0] * sm.S[0] + sm.S[1] * sm.S[1] + sm.S[2] * sm.S[2];
    const double c = s.casimir();
    worst_cas = std::max(worst_cas, (cas - c * CMat::Identity(s.dim(), s.dim())).norm() /
                                        (std::max(1.0, c) * std::sqrt(double(s.dim()))));
  }
  r.metrics = {{"max_twice_s", 25}, {"commutator_rel", worst_comm}, {"casimir_rel", worst_cas},
               {"hermiticity_rel", worst_herm}};
  r.passed = worst_comm <= 1e-10 && worst_cas <= 1e-10 && worst_herm <= 1e-10;
  r.summary = "commutator " + sci(worst_comm) + ", Casimir " + sci(worst_cas) + " (tol 1e-10)";
}

void representation_law(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SpinMatrices> sms;
  for (int tw = 0; tw <= 12; ++tw) sms.push_back(build_spin_matrices(SpinLabel(tw)));
  double hom = 0, par = 0;
  for (int t = 0; t < 100; ++t) {
    const Mat2c u = random_su2(rng), v = random_su2(rng);
    const Vec3 ku = rotation_vector_from_su2(u), kv = rotation_vector_from_su2(v);
    const Vec3 kuv = rotation_vector_from_su2(u * v), kmu = rotation_vector_from_su2(-u);
    for (const auto& sm : sms) {
      const CMat Du = wigner_d(sm, ku);
      hom = std::max(hom, (wigner_d(sm, kuv) - Du * wigner_d(sm, kv)).norm());
      const double sign = sm.s.half_integer() ? -1.0 : 1.0;
      par = std::max(par, (wigner_d(sm, kmu) - sign * Du).norm());
    }
  }
  r.metrics = {{"pairs", 100}, {"max_s", 6}, {"homomorphism", hom}, {"parity", par}, {"seed", seed}};
  r.passed = hom <= 1e-9 && par <= 1e-12;
  r.summary = "||D(uv) - D(u)D(v)|| " + sci(hom) + " (tol 1e-9), parity " + sci(par) + " (tol 1e-12)";
}

void geometry(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double det_err = 0, tau_err = 0, gen_err = 0, gen_literal = 0;
  for (int t = 0; t < 100; ++t) {
    const Vec3 k = random_ball(rng, 0.95 * two_pi);
    const double g = std::sqrt(killing_metric(k).determinant());
    det_err = std::max(det_err, std::abs(g - haar_weight(k)) / haar_weight(k));
    const Mat2c u = random_su2(rng), v = random_su2(rng);
    tau_err = std::max(tau_err, (covering_projection(u * v) - covering_projection(u) * covering_projection(v)).norm());
  }
  const double h = 1e-4;
  for (int tw = 0; tw <= 4; ++tw) {
    const auto sm = build_spin_matrices(SpinLabel(tw));
    std::mt19937_64 local(seed + tw);
    for (int t = 0; t < 100; ++t) {
      const Vec3 k = random_ball(local, 5.0);
      const auto gc = generator_coefficients(k);
      std::array<CMat, 3> dk;
      for (int b = 0; b < 3; ++b) {
        Vec3 e = Vec3::Zero();
        e[b] = h;
        dk[b] = (wigner_d(sm, k + e) - wigner_d(sm, k - e)) / (2.0 * h);
      }
      const CMat D = wigner_d(sm, k);
      for (int a = 0; a < 3; ++a) {
        CMat L = CMat::Zero(sm.s.dim(), sm.s.dim());
        for (int b = 0; b < 3; ++b) L += gc.lambda(a, b) * dk[b];
        const CMat lhs = cplx(0.0, -1.0) * L;
        gen_err = std::max(gen_err, (lhs + sm.S[a] * D).norm());
        gen_literal = std::max(gen_literal, (lhs - sm.S[a] * D).norm());
      }
    }
  }
  r.metrics = {{"sqrt_det_metric_vs_haar", det_err},
               {"tau_homomorphism", tau_err},
               {"generator_relation", gen_err},
               {"generator_relation_orientation", "(1/i) Lambda_a D = -S_a D for D = exp(-i k.S)"},
               {"generator_relation_literal_sign", gen_literal},
               {"points", 100},
               {"max_s", 2},
               {"step", h},
               {"seed", seed}};
  r.passed = det_err <= 1e-10 && tau_err <= 1e-10 && gen_err <= 1e-6;
  r.summary = "sqrt det " + sci(det_err) + ", tau " + sci(tau_err) + " (tol 1e-10), generator " + sci(gen_err) +
              " (tol 1e-6)";
}

void peter_weyl(CriterionResult& r, std::uint64_t) {
  const auto quad = su2_haar_quadrature(32);
  std::vector<SpinMatrices> sms;
  int total = 0;
  for (int tw = 0; tw <= 4; ++tw) {
    sms.push_back(build_spin_matrices(SpinLabel(tw)));
    total += (tw + 1) * (tw + 1);
  }
  CMat G = CMat::Zero(total, total);
  Eigen::VectorXcd v(total);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    int off = 0;
    for (const auto& sm : sms) {
      const CMat D = wigner_d(sm, quad.nodes[i]);
      for (int a = 0; a < D.rows(); ++a)
        for (int b = 0; b < D.cols(); ++b) v[off++] = D(a, b);
    }
    G.noalias() += quad.weights[i] * v.conjugate() * v.transpose();
  }
  Eigen::VectorXd target(total);
  int off = 0;
  for (const auto& sm : sms)
    for (int e = 0; e < sm.s.dim() * sm.s.dim(); ++e) target[off++] = 1.0 / sm.s.dim();
  const double res = (G - CMat(target.cast<cplx>().asDiagonal())).cwiseAbs().maxCoeff();
  r.metrics = {{"level", 32}, {"nodes", quad.nodes.size()}, {"max_s", 2}, {"max_residual", res}};
  r.passed = res <= 1e-6;
  r.summary = "max |<D^s_mn, D^s'_m'n'> - delta/(2s+1)| = " + sci(res) + " (tol 1e-6)";
}

void radial_casimir(CriterionResult& r, std::uint64_t) {
  ojson cases = ojson::array();
  bool ok = true;
  std::string text;
  for (int tw : {1, 2}) {
    const SpinLabel s(tw);
    std::vector<double> err;
    const std::vector<int> sizes{63, 127, 255};
    for (int N : sizes) {
      const auto k = radial_grid(N);
      std::vector<double> f(N);
      for (int i = 0; i < N; ++i) f[i] = character(s, k[i]);
      err.push_back(std::abs(radial_casimir_eigenvalue(f) + s.casimir()));
    }
    const double p1 = std::log(err[0] / err[1]) / std::log(2.0), p2 = std::log(err[1] / err[2]) / std::log(2.0);
    const bool good = p2 >= 1.5 && p2 <= 2.5 && err[2] < 1e-3;
    ok = ok && good;
    cases.push_back({{"s", s.str()}, {"exact", -s.casimir()}, {"points", sizes}, {"errors", err},
                     {"observed_order", {p1, p2}}});
    text += (text.empty() ? "" : ", ") + std::string("s=") + s.str() + " order " + fmt12(round12(p2)).substr(0, 5);
  }
  r.metrics = {{"cases", cases}};
  r.passed = ok;
  r.summary = text + " (window [1.5, 2.5])";
}

void sqrtp_equivalence(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  const PlanarSector sec{1, 2};
  const double box = 20.0;
  const std::vector<int> res{512, 1024, 2048};
  SolverOptions opt;
  opt.seed = seed;
  std::map<std::string, ConvergenceReport> reps;
  for (Scheme sc : {Scheme::Divergence, Scheme::Flat}) {
    auto fac = [&](int N, double L) {
      return planar_x_operator(ModelKind::AffAff, p, sec, Axis{0.0, L, N}, nullptr, sc).H;
    };
    reps[to_string(sc)] = convergence_study(fac, res, {box}, 3, opt);
  }
  const auto& d = reps["divergence"];
  const auto& f = reps["flat"];
  double lim = 0, raw = 0;
  for (int i = 0; i < 3; ++i) {
    lim = std::max(lim, std::abs(d.extrapolated[i] - f.extrapolated[i]));
    raw = std::max(raw, std::abs(d.rows.back().values[i] - f.rows.back().values[i]));
  }
  r.metrics = {{"sector", "(1,2)"},
               {"x_box", box},
               {"resolutions", res},
               {"divergence", convergence_json(d)},
               {"flat", convergence_json(f)},
               {"converged_difference", lim},
               {"raw_difference_2048", raw}};
  r.passed = lim <= 1e-6;
  r.summary = "converged spectra differ by " + sci(lim) + " (tol 1e-6); raw 2048-point difference " + sci(raw);
}

void planar_dilatation(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  const double kappa = 1.0;
  const auto po = planar_quantum_operators(ModelKind::AffAff, p, {0, 0}, Axis{-6.0, 6.0, 2048}, Axis{0.0, 10.0, 64},
                                           [kappa](double q) { return 0.5 * kappa * q * q; }, nullptr);
  SolverOptions opt;
  opt.seed = seed;
  const auto sp = solve_lowest(po.q_op, 6, opt);
  const double gap = std::sqrt(kappa / (2.0 * (p.A + 2.0 * p.B)));
  std::vector<double> gaps;
  double worst = 0;
  for (int i = 1; i < 6; ++i) {
    gaps.push_back(sp.eigenvalues[i] - sp.eigenvalues[i - 1]);
    worst = std::max(worst, std::abs(gaps.back() - gap) / gap);
  }
  r.metrics = {{"kappa", kappa}, {"A", p.A}, {"B", p.B}, {"q_box", {-6.0, 6.0}}, {"points", 2048},
               {"expected_gap", gap}, {"gaps", gaps}, {"max_rel_error", worst}, {"spectrum", spectrum_json(sp)}};
  r.passed = sp.converged && worst <= 1e-4;
  r.summary = "5 gaps vs " + fmt12(gap) + ": max rel error " + sci(worst) + " (tol 1e-4)";
}

void discreteness(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  SolverOptions opt;
  opt.seed = seed;
  const std::vector<double> boxes{20.0, 40.0, 80.0};
  auto lowest = [&](PlanarSector s) {
    std::vector<double> e;
    for (double L : boxes) {
      auto op = planar_x_operator(ModelKind::AffAff, p, s, Axis{0.0, L, static_cast<int>(100 * L)}, nullptr);
      e.push_back(solve_lowest(op, 1, opt).eigenvalues[0]);
    }
    return e;
  };
  const auto a = lowest({1, 2}), b = lowest({-1, 2}), ref = lowest({3, 4});
  const double da = std::abs(a[2] - a[1]), db = std::abs(b[2] - b[1]), dref = std::abs(ref[2] - ref[1]);
  const bool bound = a[2] < 0.0 && da <= 1e-6;
  const bool cont = *std::min_element(b.begin(), b.end()) >= 0.0 && db > 1e-6;
  r.metrics = {{"x_boxes", boxes},
               {"points_per_unit", 100},
               {"sector_1_2_lowest", a},
               {"sector_1_2_box_change", da},
               {"sector_-1_2_lowest", b},
               {"sector_-1_2_box_change", db},
               {"continuum_threshold", 1.0 / (4.0 * p.A)},
               {"reference_sector_3_4_lowest", ref},
               {"reference_sector_3_4_box_change", dref},
               {"reference_exact", -0.75 / p.A},
               {"note", "continuum threshold hbar^2/(4A); sector (1,2) has no level below it"}};
  r.passed = bound && cont;
  r.summary = std::string("(1,2) lowest ") + fmt12(a[2]) + (bound ? " bound" : " not bound") + ", (-1,2) lowest " +
              fmt12(b[2]) + (cont ? " continuum-like" : " unexpected") + "; reference (3,4) " + fmt12(ref[2]);
}

void dalembert_ladder(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.I = 1.0;
  const double L = 6.5;
  const int N = 200;
  GridSpec g;
  g.axes = {Axis{0.0, L, N}, Axis{0.0, L, N}};
  SolverOptions opt;
  opt.method = Method::Lanczos;
  opt.shift_invert = true;
  opt.seed = seed;
  opt.tol = 1e-8;
  auto V = [](const RVec& q) { return 0.5 * q.squaredNorm(); };
  double worst = 0;
  bool conv = true;
  std::map<int, int> pooled;
  ojson sectors = ojson::array();
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) {
      auto op = dalembert_planar(p, {m, n}, g, V);
      auto sp = solve_lowest(op, 6, opt);
      conv = conv && sp.converged;
      const bool contributes = (m + n) % 2 == 0;
      for (double e : sp.eigenvalues) {
        const double lvl = std::max(2.0, std::round(e));
        worst = std::max(worst, std::abs(e - lvl) / lvl);
        if (contributes) ++pooled[static_cast<int>(lvl)];
      }
      sectors.push_back({{"m", m}, {"n", n}, {"contributes", contributes}, {"scheme", to_string(op.scheme)},
                         {"eigenvalues", spectrum_json(sp)["eigenvalues"]}});
    }
  const bool mult = pooled[2] == 1 && pooled[3] == 4 && pooled[4] == 10;
  r.metrics = {{"grid", grid_json(g)},         {"chart", "rotated"},          {"max_rel_ladder_error", worst},
               {"multiplicity_2", pooled[2]}, {"multiplicity_3", pooled[3]}, {"multiplicity_4", pooled[4]},
               {"sectors", sectors}};
  r.passed = conv && worst <= 1e-3 && mult;
  r.summary = "max ladder error " + sci(worst) + " (tol 1e-3), multiplicities " + std::to_string(pooled[2]) + "," +
              std::to_string(pooled[3]) + "," + std::to_string(pooled[4]) + " (expected 1,4,10)";
}

void legendre(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1.0;
  SolverOptions opt;
  opt.seed = seed;
  auto op = planar_x_operator(ModelKind::UnitaryGroup, p, {0, 0}, Axis{0.0, pi, 2048}, nullptr);
  auto sp = solve_lowest(op, 5, opt);
  double worst = 0;
  std::vector<double> exact;
  for (int l = 0; l <= 4; ++l) {
    exact.push_back(l * (l + 1) / p.A);
    worst = std::max(worst, std::abs(sp.eigenvalues[l] - exact.back()) / std::max(1.0, exact.back()));
  }
  r.metrics = {{"points", 2048}, {"exact", exact}, {"spectrum", spectrum_json(sp)}, {"max_rel_error", worst}};
  r.passed = sp.converged && worst <= 1e-3;
  r.summary = "l(l+1)/A for l = 0..4: max rel error " + sci(worst) + " (tol 1e-3)";
}

void spinor_assembly(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  p.n = 3;
  const auto sec = SectorLabel::spinor(SpinLabel(1), SpinLabel(1));
  const auto op = assemble(ModelKind::AffAff, p, sec, staggered_box(4.0, 16), dilatational);
  const double defect = symmetry_defect(op.H);
  SolverOptions it;
  it.method = Method::Lanczos;
  it.seed = seed;
  const auto sp = solve_lowest(op, 4, it);
  const double worst_res = *std::max_element(sp.residuals.begin(), sp.residuals.end());

  const auto small = assemble(ModelKind::AffAff, p, sec, staggered_box(4.0, 8), dilatational);
  SolverOptions dn;
  dn.method = Method::Dense;
  const auto a = solve_lowest(small, 4, dn), b = solve_lowest(small, 4, it);
  double agree = 0;
  for (int i = 0; i < 4; ++i) agree = std::max(agree, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
  r.metrics = {{"grid", grid_json(op.grid)}, {"unknowns", op.dim()},          {"symmetry_defect", defect},
               {"spectrum", spectrum_json(sp)}, {"coarse_unknowns", small.dim()}, {"dense_vs_lanczos", agree}};
  r.passed = defect <= 1e-12 && sp.converged && sp.eigenvalues.size() == 4 && worst_res <= 1e-6 && agree <= 1e-8;
  r.summary = "symmetry " + sci(defect) + ", 4 levels residual <= " + sci(worst_res) + ", dense/iterative " +
              sci(agree);
}

void superselection(CriterionResult& r, std::uint64_t seed) {
  const SpinLabel s0(0), sh(1), s1(2);
  const auto a = halfness_validate({{s0, s0}, {s1, s1}});
  const auto b = halfness_validate({{sh, sh}});
  const auto c = halfness_validate({{s0, sh}});
  const auto d = halfness_validate({{s0, s0}, {sh, sh}});
  const bool labels = a.projectable && a.bosonic && !a.fermionic && b.projectable && b.fermionic &&
                      !c.violations.empty() && c.accepted.empty() && !d.projectable && d.violations.empty();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridSpec grid = staggered_box(2.0, 6);
  ReducedAmplitude f(SectorLabel::spinor(sh, sh), grid);
  for (auto& v : f.values) v = cplx(g(rng), g(rng));
  const std::vector<ReducedAmplitude> amps{f};
  double flip = 0, mod = 0;
  for (int t = 0; t < 50; ++t) {
    const Mat2c u = random_su2(rng), v = random_su2(rng);
    RVec y(3);
    for (int i = 0; i < 3; ++i) y[i] = 1.5 * std::uniform_real_distribution<double>(-1, 1)(rng);
    const CMat psi = synthesize_sectors(amps, u, y, v)[0];
    const CMat pu = synthesize_sectors(amps, Mat2c(-u), y, v)[0];
    const CMat pv = synthesize_sectors(amps, u, y, Mat2c(-v))[0];
    flip = std::max({flip, (pu + psi).norm(), (pv + psi).norm()});
    mod = std::max({mod, (pu.cwiseAbs2() - psi.cwiseAbs2()).norm(), (pv.cwiseAbs2() - psi.cwiseAbs2()).norm()});
  }
  r.metrics = {{"integer_class_projectable", a.projectable},
               {"half_class_projectable", b.projectable},
               {"rejected_0_half", c.violations},
               {"mixed_projectable", d.projectable},
               {"sign_flip_error", flip},
               {"modulus_error", mod}};
  r.passed = labels && flip <= 1e-12 && mod <= 1e-12;
  r.summary = std::string(labels ? "labels classified" : "label classification wrong") + ", sign flip " + sci(flip) +
              ", |Psi|^2 " + sci(mod) + " (tol 1e-12)";
}

void scalar_product(CriterionResult& r, std::uint64_t seed) {
  InertialParams p;
  p.A = 1;
  p.B = 0.5;
  p.n = 3;
  const GridSpec grid = staggered_box(4.0, 8);
  const SpinLabel s0(0), sh(1), s1(2);
  RVec weight;
  double vol = 0;
  auto eigen_amps = [&](SectorLabel sec, int count) {
    auto op = assemble(ModelKind::AffAff, p, sec, grid, dilatational);
    SolverOptions dn;
    dn.method = Method::Dense;
    auto sp = solve_lowest(op, count, dn);
    weight = full_weight(op);
    vol = op.cell_volume();
    std::vector<ReducedAmplitude> out;
    for (int i = 0; i < count; ++i) {
      auto f = amplitude_from_vector(op, sp.vectors.col(i));
      const double nrm = std::sqrt(weighted_inner_product(f, f, weight, vol).real());
      for (auto& v : f.values) v /= nrm;
      out.push_back(f);
    }
    return out;
  };
  const auto half = eigen_amps(SectorLabel::spinor(sh, sh), 2);
  const auto zero = eigen_amps(SectorLabel::spinor(s0, s0), 1);
  const auto one = eigen_amps(SectorLabel::spinor(s1, s1), 1);

  ReducedAmplitude mixed = half[0];
  const cplx ph = std::polar(1.0, 0.7);
  for (std::size_t i = 0; i < mixed.values.size(); ++i)
    mixed.values[i] = ph * (0.6 * half[0].values[i] + 0.8 * half[1].values[i]);

  struct Pair {
    std::string name;
    std::vector<ReducedAmplitude> a, b;
  };
  std::vector<Pair> pairs{{"single normalised sector (1/2,1/2)", {half[0]}, {half[0]}},
                          {"mixed sectors {(1/2,1/2),(0,0)} vs {(1/2,1/2),(1,1)}", {half[0], zero[0]}, {mixed, one[0]}}};
  const long samples = 100000;
  ojson out = ojson::array();
  bool ok = true;
  double worst_sigma = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const cplx red = reduced_product(pairs[k].a, pairs[k].b, weight, vol);
    const auto mc = montecarlo_full_product(pairs[k].a, pairs[k].b, weight, vol, samples, seed + k);
    const double zr = std::abs(mc.estimate.real() - red.real()) / mc.stderr_re;
    const double zi = mc.stderr_im > 0 ? std::abs(mc.estimate.imag() - red.imag()) / mc.stderr_im
                                       : (std::abs(mc.estimate.imag() - red.imag()) < 1e-12 ? 0.0 : 1e9);
    worst_sigma = std::max({worst_sigma, zr, zi});
    ok = ok && zr <= 3.0 && zi <= 3.0;
    out.push_back({{"pair", pairs[k].name},
                   {"reduced", {red.real(), red.imag()}},
                   {"montecarlo", {mc.estimate.real(), mc.estimate.imag()}},
                   {"stderr", {mc.stderr_re, mc.stderr_im}},
                   {"sigmas", {zr, zi}},
                   {"seed", mc.seed}});
  }
  r.metrics = {{"samples", samples}, {"grid", grid_json(grid)}, {"pairs", out}};
  r.passed = ok;
  r.summary = "max deviation " + fmt12(round12(worst_sigma)).substr(0, 5) + " sigma over 2 pairs at 1e5 samples (tol 3)";
}

struct Entry {
  const char* title;
  double budget;
  void (*fn)(CriterionResult&, std::uint64_t);
};

const Entry table[criterion_count] = {
    {"spin algebra", 5, spin_algebra},
    {"representation law", 10, representation_law},
    {"rotation-group geometry", 30, geometry},
    {"Peter-Weyl orthogonality", 60, peter_weyl},
    {"radial Casimir", 10, radial_casimir},
    {"sqrt(P) equivalence", 60, sqrtp_equivalence},
    {"planar harmonic dilatation", 30, planar_dilatation},
    {"discreteness criterion", 120, discreteness},
    {"d'Alembert oscillator ladder", 300, dalembert_ladder},
    {"U(2) Legendre check", 30, legendre},
    {"n=3 spinor-spinor assembly", 600, spinor_assembly},
    {"superselection", 10, superselection},
    {"scalar-product reduction", 120, scalar_product},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > criterion_count) throw ValidationError("criterion id must be in 1.." + std::to_string(criterion_count));
  const Entry& e = table[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  r.budget_seconds = e.budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.fn(r, seed);
  } catch (const std::exception& ex) {
    r.passed = false;
    r.summary = std::string("error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.budget_seconds) {
    r.passed = false;
    r.summary += "; runtime " + fmt12(round12(r.seconds)) + " s exceeds " + fmt12(e.budget) + " s";
  }
  return r;
}

ojson criterion_json(const CriterionResult& r) {
  ojson j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["passed"] = r.passed;
  j["seconds"] = round12(r.seconds);
  j["budget_seconds"] = r.budget_seconds;
  j["summary"] = r.summary;
  j["metrics"] = r.metrics;
  return j;
}

std::string criterion_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "criterion %2d %s %-30s %8.2f s  ", r.id, r.passed ? "PASS" : "FAIL",
                r.title.c_str(), r.seconds);
  return head + r.summary;
}

}  // namespace affq
