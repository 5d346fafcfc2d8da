#include "affq/reduced_hamiltonians.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace affq {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::AffAff: return "aff-aff";
    case ModelKind::MetAff: return "met-aff";
    case ModelKind::AffMet: return "aff-met";
    case ModelKind::DAlembert: return "dalembert";
    case ModelKind::UnitaryGroup: return "unitary";
  }
  return "?";
}

ModelKind parse_kind(const std::string& s) {
  for (auto k : {ModelKind::AffAff, ModelKind::MetAff, ModelKind::AffMet, ModelKind::DAlembert,
                 ModelKind::UnitaryGroup})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown model kind '" + s + "' (aff-aff, met-aff, aff-met, dalembert, unitary)");
}

bool is_hyperbolic(ModelKind k) {
  return k == ModelKind::AffAff || k == ModelKind::MetAff || k == ModelKind::AffMet;
}

std::string to_string(Chart c) {
  switch (c) {
    case Chart::Invariants: return "invariants";
    case Chart::Planar: return "planar";
    case Chart::Rotated: return "rotated";
    case Chart::Shear: return "shear";
  }
  return "?";
}

Chart parse_chart(const std::string& s) {
  for (auto c : {Chart::Invariants, Chart::Planar, Chart::Rotated, Chart::Shear})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown chart '" + s + "' (invariants, planar, rotated, shear)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Auto: return "auto";
    case Scheme::Divergence: return "divergence";
    case Scheme::Flat: return "flat";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  for (auto c : {Scheme::Auto, Scheme::Divergence, Scheme::Flat})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown scheme '" + s + "' (auto, divergence, flat)");
}

void InertialParams::validate(ModelKind kind) const {
  auto fail = [](const std::string& m) { throw ValidationError("inertial parameters: " + m); };
  if (n < 2) fail("n must be at least 2");
  if (!std::isfinite(I) || !std::isfinite(A) || !std::isfinite(B)) fail("non-finite constant");
  switch (kind) {
    case ModelKind::AffAff:
    case ModelKind::UnitaryGroup:
      if (A == 0) fail("A must be non-zero");
      if (A + n * B == 0) fail("A + nB must be non-zero");
      break;
    case ModelKind::MetAff:
    case ModelKind::AffMet:
      if (A == 0) fail("A must be non-zero");
      if (I == 0) fail("I must be non-zero");
      if (I * I == A * A) fail("I^2 must differ from A^2");
      if (B == 0) fail("B must be non-zero");
      if (I + A + n * B == 0) fail("I + A + nB must be non-zero");
      if (I + A == 0) fail("I + A must be non-zero");
      break;
    case ModelKind::DAlembert:
      if (!(I > 0)) fail("I must be positive");
      break;
  }
}

SectorLabel SectorLabel::planar(int m, int n_label) {
  SectorLabel s;
  s.n = 2;
  s.m = m;
  s.nl = n_label;
  return s;
}

SectorLabel SectorLabel::spinor(SpinLabel s, SpinLabel j) {
  SectorLabel out;
  out.n = 3;
  out.alpha = s;
  out.beta = j;
  out.validate();
  return out;
}

SectorLabel SectorLabel::scalar(int n) {
  SectorLabel s;
  s.n = n;
  return s;
}

void SectorLabel::validate() const {
  if (n < 2) throw ValidationError("sector dimension must be at least 2");
  if (n == 3 && (alpha.twice - beta.twice) % 2 != 0)
    throw ValidationError("sector (" + alpha.str() + "," + beta.str() +
                          ") has half-integer j - s; such amplitudes vanish identically");
  if (n > 3 && (alpha.twice != 0 || beta.twice != 0 || m != 0 || nl != 0))
    throw ValidationError("only the scalar sector is available for n > 3");
  if (n == 2 && (alpha.twice != 0 || beta.twice != 0))
    throw ValidationError("n = 2 sectors carry Fourier labels (m, n), not spin labels");
}

std::string SectorLabel::str() const {
  std::ostringstream os;
  if (n == 2)
    os << "(" << m << "," << nl << ")";
  else if (n == 3)
    os << "(" << alpha.str() << "," << beta.str() << ")";
  else
    os << "scalar";
  return os.str();
}

long GridSpec::total_nodes() const {
  long t = 1;
  for (const auto& a : axes) t *= a.points;
  return t;
}

void GridSpec::validate() const {
  if (axes.empty()) throw ValidationError("grid has no axes");
  if (!(offset > 0.0 && offset < 1.0)) throw ValidationError("grid offset must lie strictly in (0, 1)");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    if (a.points < 5) throw ValidationError("axis " + std::to_string(i) + ": at least 5 points required");
    if (!(a.max > a.min)) throw ValidationError("axis " + std::to_string(i) + ": max must exceed min");
  }
}

std::vector<int> GridSpec::unravel(long index) const {
  std::vector<int> idx(axes.size());
  for (int d = dims() - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(index % axes[d].points);
    index /= axes[d].points;
  }
  return idx;
}

long GridSpec::ravel(const std::vector<int>& idx) const {
  long r = 0;
  for (int d = 0; d < dims(); ++d) r = r * axes[d].points + idx[d];
  return r;
}

RVec GridSpec::coords(long index) const {
  auto idx = unravel(index);
  RVec y(dims());
  for (int d = 0; d < dims(); ++d) y[d] = axes[d].node(idx[d], offset);
  return y;
}

int chart_dims(Chart c, int n) {
  switch (c) {
    case Chart::Invariants: return n;
    case Chart::Planar:
    case Chart::Rotated: return 2;
    case Chart::Shear: return n - 1;
  }
  return n;
}

RMat chart_matrix(Chart c, int n) {
  switch (c) {
    case Chart::Invariants: return RMat::Identity(n, n);
    case Chart::Planar: {
      if (n != 2) throw ValidationError("planar (q,x) chart requires n = 2");
      RMat M(2, 2);
      M << 1.0, -0.5, 1.0, 0.5;
      return M;
    }
    case Chart::Rotated: {
      if (n != 2) throw ValidationError("rotated (Q+,Q-) chart requires n = 2");
      RMat M(2, 2);
      const double r = 1.0 / std::sqrt(2.0);
      M << r, r, r, -r;
      return M;
    }
    case Chart::Shear: {
      // rows: mean, then y_k = q_{k+1} - mean(q_1..q_k)
      RMat T = RMat::Zero(n, n);
      T.row(0).setConstant(1.0 / n);
      for (int k = 1; k < n; ++k) {
        for (int i = 0; i < k; ++i) T(k, i) = -1.0 / k;
        T(k, k) = 1.0;
      }
      RMat Minv = T.inverse();
      return Minv.rightCols(n - 1);
    }
  }
  return RMat::Identity(n, n);
}

KineticCoeffs kinetic_coeffs(ModelKind kind, const InertialParams& p, const SectorLabel& sec) {
  KineticCoeffs k;
  const int n = p.n;
  switch (kind) {
    case ModelKind::AffAff:
    case ModelKind::UnitaryGroup:
      k.cD = 1.0 / (2.0 * p.A);
      k.cS = p.B / (2.0 * p.A * (p.A + n * p.B));
      k.cF = p.A;
      break;
    case ModelKind::MetAff:
    case ModelKind::AffMet:
      k.cD = 1.0 / (2.0 * p.alpha());
      k.cS = -1.0 / (2.0 * p.beta());
      k.cF = p.alpha();
      k.constant = casimir_constant(kind, sec, p);
      break;
    case ModelKind::DAlembert:
      k.cD = 1.0 / (2.0 * p.I);
      k.cS = 0.0;
      k.cF = p.I;
      break;
  }
  return k;
}

double weight_factor(const RVec& q, ModelKind kind) {
  double P = 1.0;
  const int n = static_cast<int>(q.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      switch (kind) {
        case ModelKind::DAlembert: P *= std::abs(q[i] * q[i] - q[j] * q[j]); break;
        case ModelKind::UnitaryGroup: P *= std::abs(std::sin(q[i] - q[j])); break;
        default: P *= std::abs(std::sinh(q[i] - q[j])); break;
      }
    }
  return P;
}

double artificial_potential(const RVec& q, ModelKind kind, double mass_coeff) {
  const int n = static_cast<int>(q.size());
  double U = 0.0;
  for (int a = 0; a < n; ++a) {
    double d1 = 0.0, d2 = 0.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const double d = q[a] - q[b];
      switch (kind) {
        case ModelKind::DAlembert: {
          const double s = q[a] + q[b];
          if (d == 0.0 || s == 0.0) throw ValidationError("artificial potential at a coincidence point");
          d1 += 0.5 * (1.0 / d + 1.0 / s);
          d2 -= 0.5 * (1.0 / (d * d) + 1.0 / (s * s));
          break;
        }
        case ModelKind::UnitaryGroup: {
          const double sn = std::sin(d);
          if (sn == 0.0) throw ValidationError("artificial potential at a coincidence point");
          d1 += 0.5 * std::cos(d) / sn;
          d2 -= 0.5 / (sn * sn);
          break;
        }
        default: {
          const double sh = std::sinh(d);
          if (sh == 0.0) throw ValidationError("artificial potential at a coincidence point");
          d1 += 0.5 * std::cosh(d) / sh;
          d2 -= 0.5 / (sh * sh);
          break;
        }
      }
    }
    U += d2 + d1 * d1;
  }
  return mass_coeff * U;
}

bool in_chamber(const RVec& qin, ModelKind kind, bool reflected) {
  const int n = static_cast<int>(qin.size());
  RVec q = reflected ? RVec(qin.reverse()) : qin;
  if (kind == ModelKind::DAlembert) {
    for (int a = 0; a + 2 < n; ++a)
      if (!(q[a] > q[a + 1])) return false;
    return q[n - 2] > std::abs(q[n - 1]);
  }
  for (int a = 0; a + 1 < n; ++a)
    if (!(q[a] > q[a + 1])) return false;
  if (kind == ModelKind::UnitaryGroup) return q[0] - q[n - 1] < pi;
  return true;
}

CMat left_spin_matrix(const SectorLabel& sec, int axis) {
  if (axis < 0 || axis > 2) throw ValidationError("spin axis must be 0, 1 or 2");
  if (sec.n == 3) return build_spin_matrices(sec.alpha).S[axis];
  if (sec.n == 2) {
    if (axis != 2) throw ValidationError("n = 2 sectors carry a single generator (axis 2)");
    return CMat::Constant(1, 1, double(sec.m));
  }
  return CMat::Zero(1, 1);
}

CMat right_spin_matrix(const SectorLabel& sec, int axis) {
  if (axis < 0 || axis > 2) throw ValidationError("spin axis must be 0, 1 or 2");
  if (sec.n == 3) return build_spin_matrices(sec.beta).S[axis];
  if (sec.n == 2) {
    if (axis != 2) throw ValidationError("n = 2 sectors carry a single generator (axis 2)");
    return CMat::Constant(1, 1, double(sec.nl));
  }
  return CMat::Zero(1, 1);
}

namespace {

struct FiberTerms {
  // one entry per pair: (pair a, pair b, (R-L)^2, (R+L)^2)
  std::vector<std::array<int, 2>> pairs;
  std::vector<RMat> minus, plus;
  bool trivial = true;
};

FiberTerms fiber_terms(const SectorLabel& sec) {
  FiberTerms t;
  if (sec.n == 2) {
    t.pairs.push_back({0, 1});
    const double dm = sec.nl - sec.m, dp = sec.nl + sec.m;
    t.minus.push_back(RMat::Constant(1, 1, dm * dm));
    t.plus.push_back(RMat::Constant(1, 1, dp * dp));
    t.trivial = (dm == 0 && dp == 0);
    return t;
  }
  if (sec.n != 3) return t;
  const int nl = sec.left_dim(), nr = sec.right_dim();
  const auto SL = build_spin_matrices(sec.alpha);
  const auto SR = build_spin_matrices(sec.beta);
  const CMat Il = CMat::Identity(nl, nl), Ir = CMat::Identity(nr, nr);
  for (int a = 0; a < 3; ++a) {
    // row-major vectorisation: vec(S f) = (S x I) vec f, vec(f S) = (I x S^T) vec f
    CMat L(nl * nr, nl * nr), R(nl * nr, nl * nr);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j)
        for (int k = 0; k < nr; ++k)
          for (int l = 0; l < nr; ++l) {
            L(i * nr + k, j * nr + l) = SL.S[a](i, j) * Ir(k, l);
            R(i * nr + k, j * nr + l) = Il(i, j) * SR.S[a](l, k);
          }
    CMat Dm = R - L, Dp = R + L;
    CMat m2 = Dm * Dm, p2 = Dp * Dp;
    if (m2.imag().norm() > 1e-12 || p2.imag().norm() > 1e-12)
      throw std::logic_error("fiber coupling is not real in the standard basis");
    t.pairs.push_back({(a + 1) % 3, (a + 2) % 3});
    t.minus.push_back(m2.real());
    t.plus.push_back(p2.real());
  }
  t.trivial = (sec.alpha.twice == 0 && sec.beta.twice == 0);
  return t;
}

// (w-, w+, eps)
std::array<double, 3> pair_weights(ModelKind kind, double qa, double qb, double c) {
  const double d = qa - qb;
  switch (kind) {
    case ModelKind::DAlembert: {
      const double s = qa + qb;
      return {1.0 / (4.0 * c * d * d), 1.0 / (4.0 * c * s * s), 1.0};
    }
    case ModelKind::UnitaryGroup: {
      const double sn = std::sin(0.5 * d), cs = std::cos(0.5 * d);
      return {1.0 / (16.0 * c * sn * sn), 1.0 / (16.0 * c * cs * cs), 1.0};
    }
    default: {
      const double sh = std::sinh(0.5 * d), ch = std::cosh(0.5 * d);
      return {1.0 / (16.0 * c * sh * sh), 1.0 / (16.0 * c * ch * ch), -1.0};
    }
  }
}

RMat fiber_from_terms(const FiberTerms& t, ModelKind kind, const RVec& q, double c, int fd) {
  RMat F = RMat::Zero(fd, fd);
  if (t.trivial) return F;
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    const double qa = q[t.pairs[p][0]], qb = q[t.pairs[p][1]];
    if (qa == qb || (kind == ModelKind::DAlembert && qa == -qb))
      throw ValidationError("fiber coupling evaluated at a coincidence point");
    auto w = pair_weights(kind, qa, qb, c);
    F += w[0] * t.minus[p] + w[2] * w[1] * t.plus[p];
  }
  return F;
}

}  // namespace

RMat fiber_coupling(ModelKind kind, const SectorLabel& sec, const RVec& q, const InertialParams& p) {
  sec.validate();
  if (q.size() != sec.n) throw ValidationError("invariant vector length does not match sector dimension");
  return fiber_from_terms(fiber_terms(sec), kind, q, kinetic_coeffs(kind, p, SectorLabel::scalar(p.n)).cF,
                          sec.fiber_dim());
}

double casimir_constant(ModelKind kind, const SectorLabel& sec, const InertialParams& p) {
  if (kind != ModelKind::MetAff && kind != ModelKind::AffMet) return 0.0;
  const bool left = kind == ModelKind::MetAff;
  if (sec.n == 2) {
    const double l = left ? sec.m : sec.nl;
    return p.I * l * l / (p.I * p.I - p.A * p.A);
  }
  if (sec.n == 3) return (left ? sec.alpha.casimir() : sec.beta.casimir()) / (2.0 * p.mu());
  return 0.0;
}

ReducedAmplitude::ReducedAmplitude(const SectorLabel& sec, const GridSpec& g) : sector(sec), grid(g) {
  sec.validate();
  g.validate();
  values.assign(std::size_t(g.total_nodes()) * sec.fiber_dim(), cplx(0.0));
}

CMat ReducedAmplitude::at(long node) const {
  const int nl = sector.left_dim(), nr = sector.right_dim();
  CMat f(nl, nr);
  const std::size_t base = std::size_t(node) * nl * nr;
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j) f(i, j) = values[base + i * nr + j];
  return f;
}

void ReducedAmplitude::set(long node, const CMat& f) {
  const int nl = sector.left_dim(), nr = sector.right_dim();
  if (f.rows() != nl || f.cols() != nr) throw ValidationError("fiber matrix has the wrong shape");
  const std::size_t base = std::size_t(node) * nl * nr;
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j) values[base + i * nr + j] = f(i, j);
}

ReducedAmplitude apply_left_spin(int axis, const ReducedAmplitude& f) {
  const CMat S = left_spin_matrix(f.sector, axis);
  ReducedAmplitude out(f.sector, f.grid);
  for (long i = 0; i < f.nodes(); ++i) out.set(i, S * f.at(i));
  return out;
}

ReducedAmplitude apply_right_spin(int axis, const ReducedAmplitude& f) {
  const CMat S = right_spin_matrix(f.sector, axis);
  ReducedAmplitude out(f.sector, f.grid);
  for (long i = 0; i < f.nodes(); ++i) out.set(i, f.at(i) * S);
  return out;
}

Scheme resolve_scheme(Scheme s, const SectorLabel& sec) {
  if (s != Scheme::Auto) return s;
  if (sec.n == 2 && std::abs(sec.m + sec.nl) % 2 == 1) return Scheme::Flat;
  return Scheme::Divergence;
}

double ReducedOperator::cell_volume() const {
  double v = std::sqrt((M.transpose() * M).determinant());
  for (const auto& a : grid.axes) v *= a.spacing();
  return v;
}

ReducedOperator assemble(ModelKind kind, const InertialParams& params, const SectorLabel& sector,
                         const GridSpec& grid, const Potential& potential, const AssembleOptions& opt) {
  params.validate(kind);
  sector.validate();
  grid.validate();
  const int n = params.n;
  if (sector.n != n) throw ValidationError("sector dimension does not match n");
  if (kind == ModelKind::DAlembert && opt.chart == Chart::Shear)
    throw ValidationError("the shear chart needs a dilatation-invariant weight; not available for dalembert");
  if (kind == ModelKind::DAlembert && opt.chart == Chart::Planar)
    throw ValidationError("the (q,x) chart is not defined for dalembert; use rotated or invariants");
  const int d = chart_dims(opt.chart, n);
  if (grid.dims() != d)
    throw ValidationError("chart '" + to_string(opt.chart) + "' needs " + std::to_string(d) + " grid axes, got " +
                          std::to_string(grid.dims()));
  if (kind == ModelKind::UnitaryGroup) {
    auto check = [](const Axis& a, int i) {
      if (a.min < 0.0 || a.max > two_pi)
        throw ValidationError("unitary model: axis " + std::to_string(i) + " must lie within (0, 2pi)");
    };
    if (opt.chart == Chart::Invariants)
      for (int i = 0; i < d; ++i) check(grid.axes[i], i);
    if (opt.chart == Chart::Planar) check(grid.axes[1], 1);
  }

  ReducedOperator op;
  op.kind = kind;
  op.params = params;
  op.sector = sector;
  op.grid = grid;
  op.chart = opt.chart;
  op.scheme = resolve_scheme(opt.scheme, sector);
  op.M = chart_matrix(opt.chart, n);
  op.fiber_dim = sector.fiber_dim();

  const RMat MtM = op.M.transpose() * op.M;
  const RMat G = MtM.inverse();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && std::abs(G(i, j)) > 1e-13 * std::abs(G(i, i))) throw std::logic_error("chart metric not diagonal");
  const RVec u = G * op.M.transpose() * RVec::Ones(n);
  const bool reflected = opt.chart == Chart::Planar || opt.chart == Chart::Shear;

  const long total = grid.total_nodes();
  op.lookup.assign(total, -1);
  std::vector<double> w;
  for (long idx = 0; idx < total; ++idx) {
    RVec q = op.M * grid.coords(idx);
    double P = weight_factor(q, kind);
    if (!(P > 1e-14)) {
      std::ostringstream os;
      os << "grid node " << idx << " lies on a coincidence hyperplane (q = " << q.transpose()
         << "); shift the axes or the offset";
      throw ValidationError(os.str());
    }
    if (!in_chamber(q, kind, reflected)) continue;
    op.lookup[idx] = static_cast<long>(op.active.size());
    op.active.push_back(idx);
    op.q.push_back(q);
    w.push_back(P);
  }
  if (op.active.empty()) throw ValidationError("grid has no nodes inside the Weyl chamber");
  op.weight = Eigen::Map<RVec>(w.data(), static_cast<long>(w.size()));

  const KineticCoeffs kc = kinetic_coeffs(kind, params, sector);
  const FiberTerms ft = fiber_terms(sector);
  const int fd = op.fiber_dim;
  std::vector<double> h(d);
  for (int i = 0; i < d; ++i) h[i] = grid.axes[i].spacing();
  std::vector<long> stride(d, 1);
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * grid.axes[i + 1].points;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(op.active.size() * fd * (2 * d + 1 + (kc.cS != 0 ? 2 * d * d : 0) + fd));
  auto scalar_entry = [&](long a, long b, double v) {
    for (int r = 0; r < fd; ++r) trip.emplace_back(a * fd + r, b * fd + r, v);
  };

  for (long a = 0; a < static_cast<long>(op.active.size()); ++a) {
    const long idx = op.active[a];
    const auto mi = grid.unravel(idx);
    const RVec& q = op.q[a];
    const double P0 = op.weight[a];
    double diag = 0.0;

    for (int i = 0; i < d; ++i) {
      const double kap = kc.cD * G(i, i) / (h[i] * h[i]);
      for (int dir : {-1, 1}) {
        const int ni = mi[i] + dir;
        const bool inbox = ni >= 0 && ni < grid.axes[i].points;
        const long nb = inbox ? op.lookup[idx + dir * stride[i]] : -1;
        if (op.scheme == Scheme::Flat) {
          if (nb >= 0) {
            diag += kap;
            scalar_entry(a, nb, -kap);
          } else {
            diag += 2.0 * kap;
          }
        } else {
          RVec yf = grid.coords(idx);
          const int f = dir > 0 ? mi[i] : mi[i] - 1;
          yf[i] = grid.axes[i].min + (f + grid.offset + 0.5) * h[i];
          const double Pf = weight_factor(op.M * yf, kind);
          if (nb >= 0) {
            diag += kap * Pf / P0;
            scalar_entry(a, nb, -kap * Pf / std::sqrt(P0 * op.weight[nb]));
          } else {
            diag += 2.0 * kap * Pf / P0;
          }
        }
      }
    }
    if (op.scheme == Scheme::Flat) diag += artificial_potential(q, kind, kc.cD);

    if (kc.cS != 0.0) {
      for (int i = 0; i < d; ++i) {
        if (u[i] == 0.0) continue;
        const double c = kc.cS * u[i] * u[i] / (h[i] * h[i]);
        for (int dir : {-1, 1}) {
          const int ni = mi[i] + dir;
          const long nb = (ni >= 0 && ni < grid.axes[i].points) ? op.lookup[idx + dir * stride[i]] : -1;
          if (nb >= 0) {
            diag -= c;
            scalar_entry(a, nb, c);
          } else {
            diag -= 2.0 * c;
          }
        }
        for (int j = i + 1; j < d; ++j) {
          if (u[j] == 0.0) continue;
          const double cc = kc.cS * 2.0 * u[i] * u[j] / (4.0 * h[i] * h[j]);
          for (int di : {-1, 1})
            for (int dj : {-1, 1}) {
              const int ni = mi[i] + di, nj = mi[j] + dj;
              if (ni < 0 || ni >= grid.axes[i].points || nj < 0 || nj >= grid.axes[j].points) continue;
              const long nb = op.lookup[idx + di * stride[i] + dj * stride[j]];
              if (nb >= 0) scalar_entry(a, nb, cc * di * dj);
            }
        }
      }
    }

    diag += kc.constant;
    if (potential) diag += potential(q);
    const RMat F = fiber_from_terms(ft, kind, q, kc.cF, fd);
    for (int r = 0; r < fd; ++r)
      for (int c = 0; c < fd; ++c) {
        double v = F(r, c) + (r == c ? diag : 0.0);
        if (v != 0.0 || r == c) trip.emplace_back(a * fd + r, a * fd + c, v);
      }
  }

  const long N = static_cast<long>(op.active.size()) * fd;
  op.H.resize(N, N);
  op.H.setFromTriplets(trip.begin(), trip.end());
  op.H.makeCompressed();
  return op;
}

GridSpec sl_constraint_project(const GridSpec& grid, int n) {
  if (n < 2) throw ValidationError("sl projection needs n >= 2");
  if (grid.dims() < n - 1) throw ValidationError("grid has fewer than n - 1 axes");
  GridSpec out;
  out.offset = grid.offset;
  out.axes.assign(grid.axes.begin(), grid.axes.begin() + (n - 1));
  return out;
}

double symmetry_defect(const Eigen::SparseMatrix<double>& H) {
  Eigen::SparseMatrix<double> D = H - Eigen::SparseMatrix<double>(H.transpose());
  const double nh = H.norm();
  return nh > 0 ? D.norm() / nh : 0.0;
}

}  // namespace affq
