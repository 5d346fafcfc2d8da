#include "affq/peterweyl.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <fstream>
#include <map>

#include "affq/halfspin_reps.hpp"
#include "affq/rotgroup_geometry.hpp"
#include "affq/spectral_solver.hpp"

namespace affq {

SuperselectionReport halfness_validate(const std::vector<std::pair<SpinLabel, SpinLabel>>& sectors) {
  SuperselectionReport r;
  for (const auto& [s, j] : sectors) {
    if ((s.twice - j.twice) % 2 != 0) {
      r.violations.push_back("sector (" + s.str() + "," + j.str() + "): j - s is half-integer, amplitude vanishes");
      continue;
    }
    r.accepted.push_back(SectorLabel::spinor(s, j));
    (s.half_integer() ? r.fermionic : r.bosonic) = true;
  }
  r.projectable = r.bosonic != r.fermionic;
  return r;
}

namespace {

bool same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.dims() != b.dims() || a.offset != b.offset) return false;
  for (int d = 0; d < a.dims(); ++d)
    if (a.axes[d].min != b.axes[d].min || a.axes[d].max != b.axes[d].max || a.axes[d].points != b.axes[d].points)
      return false;
  return true;
}

bool same_sector(const SectorLabel& a, const SectorLabel& b) {
  return a.n == b.n && a.alpha == b.alpha && a.beta == b.beta && a.m == b.m && a.nl == b.nl;
}

RMat resolve_chart(const RMat& chart, const ReducedAmplitude& f) {
  if (chart.size() == 0) {
    if (f.grid.dims() != f.sector.n) throw ValidationError("grid dimension differs from n; pass the chart matrix");
    return RMat::Identity(f.sector.n, f.sector.n);
  }
  if (chart.rows() != f.sector.n || chart.cols() != f.grid.dims())
    throw ValidationError("chart matrix shape does not match the amplitude");
  return chart;
}

struct GroupFactors {
  std::map<int, SpinMatrices> spins;
  std::map<int, CMat> left, right;

  explicit GroupFactors(const std::vector<const ReducedAmplitude*>& amps) {
    for (auto* a : amps) {
      if (a->sector.n != 3) throw ValidationError("group synthesis needs n = 3 spinor sectors");
      for (auto s : {a->sector.alpha, a->sector.beta})
        if (!spins.count(s.twice)) spins.emplace(s.twice, build_spin_matrices(s));
    }
  }
  void update(const Mat2c& u, const Mat2c& v) {
    const Vec3 ku = rotation_vector_from_su2(u), kv = rotation_vector_from_su2(v.adjoint());
    for (const auto& [t, sm] : spins) {
      left[t] = wigner_d(sm, ku);
      right[t] = wigner_d(sm, kv);
    }
  }
  CMat apply(const SectorLabel& s, const CMat& f) const { return left.at(s.alpha.twice) * f * right.at(s.beta.twice); }
};

}  // namespace

CMat interpolate(const ReducedAmplitude& f, const RVec& y) {
  const GridSpec& g = f.grid;
  const int d = g.dims();
  if (y.size() != d) throw ValidationError("interpolation point has the wrong dimension");
  const int nl = f.sector.left_dim(), nr = f.sector.right_dim();
  std::vector<int> lo(d);
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) {
    const double t = (y[i] - g.axes[i].min) / g.axes[i].spacing() - g.offset;
    if (!(t >= -1.0 && t <= g.axes[i].points)) return CMat::Zero(nl, nr);
    lo[i] = std::min(static_cast<int>(std::floor(t)), g.axes[i].points - 1);
    w[i] = t - lo[i];
  }
  CMat out = CMat::Zero(nl, nr);
  std::vector<int> idx(d);
  for (int corner = 0; corner < (1 << d); ++corner) {
    double wt = 1.0, sign = 1.0;
    bool skip = false;
    for (int i = 0; i < d; ++i) {
      const int bit = (corner >> i) & 1;
      wt *= bit ? w[i] : 1.0 - w[i];
      int k = lo[i] + bit;
      if (k < 0) {
        k = 0;
        sign = -sign;
      } else if (k >= g.axes[i].points) {
        if (k > g.axes[i].points) skip = true;
        k = g.axes[i].points - 1;
        sign = -sign;
      }
      idx[i] = k;
    }
    if (skip || wt == 0.0) continue;
    out += (sign * wt) * f.at(g.ravel(idx));
  }
  return out;
}

std::vector<CMat> synthesize_sectors(const std::vector<ReducedAmplitude>& amps, const Mat2c& u, const RVec& y,
                                     const Mat2c& v) {
  require_su2(u);
  require_su2(v);
  std::vector<const ReducedAmplitude*> ptr;
  for (const auto& a : amps) ptr.push_back(&a);
  GroupFactors gf(ptr);
  gf.update(u, v);
  std::vector<CMat> out;
  for (const auto& a : amps) out.push_back(gf.apply(a.sector, interpolate(a, y)));
  return out;
}

cplx synthesize(const std::vector<ReducedAmplitude>& amps, const Mat2c& u, const RVec& y, const Mat2c& v) {
  cplx s = 0.0;
  for (const auto& m : synthesize_sectors(amps, u, y, v)) s += m(0, 0);
  return s;
}

double degenerate_constraint_check(const ReducedAmplitude& f, double c, const RMat& chart) {
  const RMat M = resolve_chart(chart, f);
  const int n = f.sector.n;
  struct Item {
    double dist;
    long node;
  };
  std::vector<Item> items;
  for (long i = 0; i < f.nodes(); ++i) {
    // outside-chamber nodes hold exact zeros and carry no information about the limit
    if (f.at(i).cwiseAbs().maxCoeff() == 0.0) continue;
    items.push_back({(M * f.grid.coords(i) - RVec::Constant(n, c)).norm(), i});
  }
  const int nl = f.sector.left_dim(), nr = f.sector.right_dim();
  CMat F0 = CMat::Zero(nl, nr);
  if (!items.empty()) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.dist < b.dist; });
    std::vector<double> dist;
    std::vector<CMat> val;
    std::vector<int> cnt;
    for (const auto& it : items) {
      const double tol = 1e-9 * (1.0 + it.dist);
      if (dist.empty() || it.dist - dist.back() > tol) {
        if (dist.size() == 3) break;
        dist.push_back(it.dist);
        val.push_back(CMat::Zero(nl, nr));
        cnt.push_back(0);
      }
      val.back() += f.at(it.node);
      ++cnt.back();
    }
    for (std::size_t i = 0; i < dist.size(); ++i) val[i] /= double(cnt[i]);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      double l = 1.0;
      for (std::size_t j = 0; j < dist.size(); ++j)
        if (j != i) l *= -dist[j] / (dist[i] - dist[j]);
      F0 += l * val[i];
    }
  }
  const bool diagonal_sector =
      n == 2 ? f.sector.m == f.sector.nl : (n == 3 ? f.sector.alpha == f.sector.beta : true);
  if (!diagonal_sector) return F0.norm();
  if (nl != nr) return F0.norm();
  const cplx mean = F0.trace() / double(nl);
  return (F0 - mean * CMat::Identity(nl, nr)).norm();
}

std::vector<RMat> k_plus_elements(int n) {
  if (n < 2 || n > 6) throw ValidationError("K+ enumeration supports 2 <= n <= 6");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RMat> out;
  do {
    for (int signs = 0; signs < (1 << n); ++signs) {
      RMat W = RMat::Zero(n, n);
      for (int a = 0; a < n; ++a) W(a, perm[a]) = (signs >> a) & 1 ? -1.0 : 1.0;
      if (W.determinant() > 0.5) out.push_back(W);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double exchange_symmetry_check(const ReducedAmplitude& f, const RMat& W, const RMat& chart) {
  const int n = f.sector.n;
  if (W.rows() != n || W.cols() != n) throw ValidationError("K+ element has the wrong size");
  std::vector<int> pi(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double w = W(a, b);
      if (w == 0.0) continue;
      if (std::abs(std::abs(w) - 1.0) > 1e-12 || pi[a] >= 0) throw ValidationError("W is not a signed permutation");
      pi[a] = b;
    }
  for (int a = 0; a < n; ++a)
    if (pi[a] < 0) throw ValidationError("W is not a signed permutation");
  if (std::abs(W.determinant() - 1.0) > 1e-12) throw ValidationError("W must have determinant +1");

  const RMat M = resolve_chart(chart, f);
  const RMat Mp = M.completeOrthogonalDecomposition().pseudoInverse();

  // candidate right-hand sides D^alpha(W^-1) f D^beta(W), one per lift
  std::vector<std::function<CMat(const CMat&)>> lifts;
  if (n == 2) {
    const double th = std::atan2(W(1, 0), W(0, 0));
    const cplx ph = std::polar(1.0, (f.sector.nl - f.sector.m) * th);
    lifts.push_back([ph](const CMat& x) { CMat y = ph * x; return y; });
  } else if (n == 3) {
    const Mat3 R = W;
    const Eigen::AngleAxisd aa(R);
    const Mat2c u = su2_from_rotation_vector(aa.angle() * aa.axis());
    if ((covering_projection(u) - R).norm() > 1e-10) throw std::logic_error("covering lift of K+ element failed");
    for (const Mat2c& w : {u, Mat2c(-u)}) {
      const CMat Dl = wigner_d(f.sector.alpha, Mat2c(w.adjoint())), Dr = wigner_d(f.sector.beta, w);
      lifts.push_back([Dl, Dr](const CMat& x) { CMat y = Dl * x * Dr; return y; });
    }
  } else {
    lifts.push_back([](const CMat& x) { return x; });
  }

  std::vector<double> worst(lifts.size(), 0.0);
  for (long i = 0; i < f.nodes(); ++i) {
    const RVec q = M * f.grid.coords(i);
    RVec qp(n);
    for (int a = 0; a < n; ++a) qp[a] = q[pi[a]];
    const RVec yp = Mp * qp;
    if ((M * yp - qp).norm() > 1e-9 * (1.0 + qp.norm())) continue;
    bool inside = true;
    for (int d = 0; d < f.grid.dims(); ++d) {
      const auto& ax = f.grid.axes[d];
      const double eps = 1e-12 * (1.0 + std::abs(ax.max - ax.min));
      if (yp[d] < ax.node(0, f.grid.offset) - eps || yp[d] > ax.node(ax.points - 1, f.grid.offset) + eps) inside = false;
    }
    if (!inside) continue;
    const CMat lhs = interpolate(f, yp), fq = f.at(i);
    for (std::size_t l = 0; l < lifts.size(); ++l) worst[l] = std::max(worst[l], (lhs - lifts[l](fq)).norm());
  }
  return *std::min_element(worst.begin(), worst.end());
}

Mat2c haar_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> g;
  const double target = two_pi * uni(rng);
  double lo = 0.0, hi = two_pi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid - std::sin(mid) < target ? lo : hi) = mid;
  }
  Vec3 axis(g(rng), g(rng), g(rng));
  while (axis.norm() < 1e-12) axis = Vec3(g(rng), g(rng), g(rng));
  return su2_from_rotation_vector(0.5 * (lo + hi) * axis.normalized());
}

cplx reduced_product(const std::vector<ReducedAmplitude>& psi1, const std::vector<ReducedAmplitude>& psi2,
                     const RVec& weight, double cell_volume) {
  cplx s = 0.0;
  for (const auto& a : psi1)
    for (const auto& b : psi2)
      if (same_sector(a.sector, b.sector)) s += weighted_inner_product(a, b, weight, cell_volume);
  return s;
}

MonteCarloEstimate montecarlo_full_product(const std::vector<ReducedAmplitude>& psi1,
                                           const std::vector<ReducedAmplitude>& psi2, const RVec& weight,
                                           double cell_volume, long samples, std::uint64_t seed) {
  if (samples < 1000) throw ValidationError("Monte-Carlo product needs at least 1000 samples");
  if (psi1.empty() || psi2.empty()) throw ValidationError("Monte-Carlo product needs non-empty wave functions");
  const GridSpec& grid = psi1.front().grid;
  std::vector<const ReducedAmplitude*> all;
  for (const auto* v : {&psi1, &psi2})
    for (const auto& a : *v) {
      if (!same_grid(a.grid, grid)) throw ValidationError("all amplitudes must share one grid");
      all.push_back(&a);
    }
  const long T = grid.total_nodes();
  if (weight.size() != T) throw ValidationError("weight length does not match the grid");
  GroupFactors gf(all);

  constexpr long chunk = 8192;
  const long chunks = (samples + chunk - 1) / chunk;
  long double sr = 0, si = 0, sr2 = 0, si2 = 0;
  for (long c = 0; c < chunks; ++c) {
    std::seed_seq ss{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(c)};
    std::mt19937_64 rng(ss);
    std::uniform_int_distribution<long> pick(0, T - 1);
    const long count = std::min(chunk, samples - c * chunk);
    for (long k = 0; k < count; ++k) {
      const long node = pick(rng);
      const Mat2c u = haar_sample(rng), v = haar_sample(rng);
      const double w = weight[node];
      if (w == 0.0) continue;
      gf.update(u, v);
      cplx p1 = 0.0, p2 = 0.0;
      for (const auto& a : psi1) p1 += gf.apply(a.sector, a.at(node))(0, 0);
      for (const auto& a : psi2) p2 += gf.apply(a.sector, a.at(node))(0, 0);
      const cplx x = double(T) * cell_volume * w * std::conj(p1) * p2;
      sr += x.real();
      si += x.imag();
      sr2 += x.real() * x.real();
      si2 += x.imag() * x.imag();
    }
  }
  MonteCarloEstimate e;
  const long double N = samples;
  const long double mr = sr / N, mi = si / N;
  e.estimate = cplx(double(mr), double(mi));
  e.stderr_re = std::sqrt(double(std::max<long double>(0, (sr2 / N - mr * mr) / (N - 1))));
  e.stderr_im = std::sqrt(double(std::max<long double>(0, (si2 / N - mi * mi) / (N - 1))));
  e.samples = samples;
  e.seed = seed;
  return e;
}

namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ValidationError("amplitude file is truncated");
  return to_little(v);
}

}  // namespace

void write_amplitude(std::ostream& os, const ReducedAmplitude& f) {
  const auto& s = f.sector;
  put<std::int32_t>(os, s.n);
  put<std::int32_t>(os, s.n == 2 ? s.m : s.alpha.twice);
  put<std::int32_t>(os, s.n == 2 ? s.nl : s.beta.twice);
  put<std::int32_t>(os, f.grid.dims());
  put<double>(os, f.grid.offset);
  for (const auto& a : f.grid.axes) {
    put<double>(os, a.min);
    put<double>(os, a.max);
    put<std::int32_t>(os, a.points);
  }
  for (const auto& v : f.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("failed to write amplitude data");
}

ReducedAmplitude read_amplitude(std::istream& is) {
  const int n = get<std::int32_t>(is), a = get<std::int32_t>(is), b = get<std::int32_t>(is);
  const int dims = get<std::int32_t>(is);
  if (n < 2 || n > 16) throw ValidationError("amplitude header: n out of range");
  if (dims < 1 || dims > 8) throw ValidationError("amplitude header: grid dimension out of range");
  SectorLabel sec;
  if (n == 2) {
    sec = SectorLabel::planar(a, b);
  } else if (n == 3) {
    if (a < 0 || b < 0) throw ValidationError("amplitude header: negative spin label");
    sec = SectorLabel::spinor(SpinLabel(a), SpinLabel(b));
  } else {
    if (a != 0 || b != 0) throw ValidationError("amplitude header: only scalar sectors exist for n > 3");
    sec = SectorLabel::scalar(n);
  }
  GridSpec g;
  g.offset = get<double>(is);
  double total = 1;
  for (int d = 0; d < dims; ++d) {
    Axis ax;
    ax.min = get<double>(is);
    ax.max = get<double>(is);
    ax.points = get<std::int32_t>(is);
    total *= std::max(ax.points, 0);
    g.axes.push_back(ax);
  }
  if (total * sec.fiber_dim() > 5e8) throw ValidationError("amplitude header: grid too large");
  ReducedAmplitude f(sec, g);
  for (auto& v : f.values) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = cplx(re, im);
  }
  return f;
}

void write_amplitude_file(const std::string& path, const ReducedAmplitude& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  write_amplitude(os, f);
}

ReducedAmplitude read_amplitude_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open amplitude file '" + path + "'");
  return read_amplitude(is);
}

}  // namespace affq
