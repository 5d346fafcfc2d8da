#include "affq/planar_models.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace affq {

std::pair<double, double> planar_coordinates(double q1, double q2) { return {0.5 * (q1 + q2), q2 - q1}; }

std::pair<double, double> planar_inverse(double q, double x) { return {q - 0.5 * x, q + 0.5 * x}; }

std::pair<double, double> planar_momenta(double p1, double p2) { return {p1 + p2, 0.5 * (p2 - p1)}; }

std::pair<double, double> planar_momenta_inverse(double p, double p_x) { return {0.5 * p - p_x, 0.5 * p + p_x}; }

double classical_kinetic(ModelKind kind, const InertialParams& params, const PlanarState& s) {
  if (params.n != 2) throw ValidationError("planar kinetic energy needs n = 2");
  params.validate(kind);
  double c, cq, extra = 0.0;
  switch (kind) {
    case ModelKind::AffAff:
      c = params.A;
      cq = params.A + 2.0 * params.B;
      break;
    case ModelKind::MetAff:
    case ModelKind::AffMet: {
      c = params.I + params.A;
      cq = c + 2.0 * params.B;
      const double pl = kind == ModelKind::MetAff ? s.p_alpha : s.p_beta;
      extra = params.I * pl * pl / (params.I * params.I - params.A * params.A);
      break;
    }
    default: throw ValidationError("classical planar kinetic energy defined for aff-aff, met-aff, aff-met");
  }
  const double dm = s.p_alpha - s.p_beta, dp = s.p_alpha + s.p_beta;
  double t = s.p * s.p / (4.0 * cq) + s.p_x * s.p_x / c + extra;
  if (dm != 0.0) {
    if (s.x == 0.0) throw ValidationError("x = 0 with non-zero spin/vorticity momenta");
    const double sh = std::sinh(0.5 * s.x);
    t += dm * dm / (16.0 * c * sh * sh);
  }
  const double ch = std::cosh(0.5 * s.x);
  t -= dp * dp / (16.0 * c * ch * ch);
  return t;
}

ReducedOperator planar_x_operator(ModelKind kind, const InertialParams& params, PlanarSector sector,
                                  const Axis& xaxis, const Potential1D& v_sh, Scheme scheme) {
  if (params.n != 2) throw ValidationError("planar operators need n = 2");
  if (kind == ModelKind::DAlembert) throw ValidationError("dalembert has no (q,x) separation; use dalembert_planar");
  GridSpec g;
  g.axes = {xaxis};
  Potential v;
  if (v_sh) v = [v_sh](const RVec& q) { return v_sh(q[1] - q[0]); };
  return assemble(kind, params, sector.label(), g, v, {Chart::Shear, scheme});
}

PlanarOperators planar_quantum_operators(ModelKind kind, const InertialParams& params, PlanarSector sector,
                                         const Axis& qaxis, const Axis& xaxis, const Potential1D& v_dil,
                                         const Potential1D& v_sh, Scheme scheme) {
  PlanarOperators out;
  out.x_op = planar_x_operator(kind, params, sector, xaxis, v_sh, scheme);

  GridSpec g;
  g.axes = {qaxis};
  g.validate();
  const KineticCoeffs kc = kinetic_coeffs(kind, params, sector.label());
  const double c = 0.5 * kc.cD - kc.cS;
  if (!(c > 0.0)) throw ValidationError("dilatational mass coefficient is not positive for these constants");
  out.q_coefficient = c;

  ReducedOperator& op = out.q_op;
  op.kind = kind;
  op.params = params;
  op.sector = sector.label();
  op.grid = g;
  op.chart = Chart::Invariants;
  op.scheme = Scheme::Flat;
  op.M = RMat::Identity(1, 1);
  op.fiber_dim = 1;
  const int N = qaxis.points;
  const double h = qaxis.spacing(), k = c / (h * h);
  op.weight = RVec::Ones(N);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < N; ++i) {
    const double q = qaxis.node(i, g.offset);
    op.active.push_back(i);
    op.lookup.push_back(i);
    op.q.push_back(RVec::Constant(1, q));
    // Dirichlet by antisymmetric ghost half a spacing outside
    double diag = (i == 0 || i == N - 1) ? 3.0 * k : 2.0 * k;
    if (N == 1) diag = 4.0 * k;
    if (v_dil) diag += v_dil(q);
    trip.emplace_back(i, i, diag);
    if (i > 0) trip.emplace_back(i, i - 1, -k);
    if (i + 1 < N) trip.emplace_back(i, i + 1, -k);
  }
  op.H.resize(N, N);
  op.H.setFromTriplets(trip.begin(), trip.end());
  op.H.makeCompressed();
  return out;
}

std::string to_string(Discreteness d) {
  switch (d) {
    case Discreteness::Discrete: return "discrete";
    case Discreteness::Continuous: return "continuous";
    case Discreteness::Marginal: return "marginal";
  }
  return "?";
}

Discreteness discreteness_criterion(PlanarSector s) {
  const int a = std::abs(s.n + s.m), b = std::abs(s.n - s.m);
  if (a > b) return Discreteness::Discrete;
  if (a < b) return Discreteness::Continuous;
  return Discreteness::Marginal;
}

ReducedOperator dalembert_planar(const InertialParams& params, PlanarSector sector, const GridSpec& grid,
                                 const Potential& v, Chart chart, Scheme scheme) {
  if (params.n != 2) throw ValidationError("planar d'Alembert operator needs n = 2");
  return assemble(ModelKind::DAlembert, params, sector.label(), grid, v, {chart, scheme});
}

std::pair<double, double> rotated_inverse(double qp, double qm) {
  const double r = 1.0 / std::sqrt(2.0);
  return {r * (qp + qm), r * (qp - qm)};
}

std::pair<double, double> polar_inverse(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

std::pair<double, double> elliptic_coordinates(double X, double Y) {
  // s = sh^2 rho solves s^2 + (1 - X^2 - Y^2) s - Y^2 = 0
  const double t = X * X + Y * Y - 1.0;
  const double disc = std::sqrt(t * t + 4.0 * Y * Y);
  const double s = t >= 0.0 ? 0.5 * (t + disc) : (disc - t > 0.0 ? 2.0 * Y * Y / (disc - t) : 0.0);
  const double shr = std::sqrt(s), chr = std::sqrt(1.0 + s);
  const double rho = std::asinh(shr);
  const double c = std::clamp(X / chr, -1.0, 1.0);
  double sn = shr > 0.0 ? Y / shr : std::sqrt(std::max(0.0, 1.0 - c * c));
  double lam = std::atan2(sn, c);
  if (lam < 0.0) lam += two_pi;
  return {rho, lam};
}

std::pair<double, double> elliptic_inverse(double rho, double lambda) {
  if (rho < 0.0) throw ValidationError("elliptic coordinate rho must be non-negative");
  return {std::cosh(rho) * std::cos(lambda), std::sinh(rho) * std::sin(lambda)};
}

PlanarCoordinates coordinate_transforms(double Q1, double Q2) {
  PlanarCoordinates c;
  const double r2 = 1.0 / std::sqrt(2.0);
  c.q_plus = r2 * (Q1 + Q2);
  c.q_minus = r2 * (Q1 - Q2);
  c.r = std::hypot(c.q_plus, c.q_minus);
  if (c.r == 0.0) throw ValidationError("polar angle undefined at the origin");
  c.phi = std::atan2(c.q_minus, c.q_plus);
  if (c.phi < 0.0) c.phi += two_pi;
  std::tie(c.rho, c.lambda) = elliptic_coordinates(c.q_plus, c.q_minus);
  return c;
}

GeodeticScan geodetic_scan(ModelKind kind, const InertialParams& params, int M, const Axis& xaxis,
                           const SolverOptions& opt) {
  if (M < 0) throw ValidationError("scan range must be non-negative");
  GeodeticScan scan;
  bool first = true;
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      auto op = planar_x_operator(kind, params, {m, n}, xaxis, nullptr);
      auto sp = solve_lowest(op, 1, opt);
      if (!sp.converged) throw ConvergenceError("geodetic scan: sector (" + std::to_string(m) + "," +
                                                std::to_string(n) + ") did not converge");
      ScanEntry e{m, n, sp.eigenvalues[0]};
      scan.entries.push_back(e);
      if (first || e.lowest < scan.minimum.lowest) scan.minimum = e;
      first = false;
    }
  return scan;
}

}  // namespace affq
