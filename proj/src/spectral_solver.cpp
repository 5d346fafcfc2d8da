#include "affq/spectral_solver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace affq {

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Dense: return "dense";
    case Method::Tridiagonal: return "tridiagonal";
    case Method::Lanczos: return "lanczos";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  for (auto m : {Method::Auto, Method::Dense, Method::Tridiagonal, Method::Lanczos})
    if (s == to_string(m)) return m;
  throw ValidationError("unknown solver method '" + s + "' (auto, dense, tridiagonal, lanczos)");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct RunResult {
  std::vector<double> values;
  std::vector<RVec> vectors;
  long iterations = 0;
  bool ok = false;
};

RVec random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RVec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

void orthogonalise(RVec& w, const std::vector<RVec>& a, const std::vector<RVec>& b) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& v : a) w -= v.dot(w) * v;
    for (const auto& v : b) w -= v.dot(w) * v;
  }
}

// Ritz pairs of `residual_apply` from a Krylov space of `apply`; lowest `want` of apply's spectrum
RunResult lanczos_run(const ApplyFn& apply, const ApplyFn& resid, int n, int want, double tol,
                      std::mt19937_64& rng, const std::vector<RVec>& locked, long cap, bool explicit_only) {
  RunResult out;
  std::vector<RVec> V;
  std::vector<double> alpha, beta;
  RVec v = random_vector(n, rng);
  orthogonalise(v, locked, V);
  v.normalize();
  RVec w(n), hy(n);
  const long room = n - static_cast<long>(locked.size());
  cap = std::min(cap, room);
  double scale = 0.0;

  auto ritz = [&](int m, bool final) -> bool {
    RVec d = Eigen::Map<RVec>(alpha.data(), m);
    RVec e = m > 1 ? RVec(Eigen::Map<RVec>(beta.data(), m - 1)) : RVec();
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const int k = std::min(want, m);
    const double bnext = static_cast<int>(beta.size()) >= m ? beta[m - 1] : 0.0;
    if (!explicit_only && !final) {
      for (int i = 0; i < k; ++i)
        if (std::abs(bnext * es.eigenvectors()(m - 1, i)) > 0.5 * tol) return false;
      if (k < want) return false;
    }
    std::vector<double> vals;
    std::vector<RVec> vecs;
    bool good = k == want;
    for (int i = 0; i < k; ++i) {
      RVec y = RVec::Zero(n);
      for (int j = 0; j < m; ++j) y += es.eigenvectors()(j, i) * V[j];
      y.normalize();
      resid(y, hy);
      const double lam = y.dot(hy);
      const double r = (hy - lam * y).norm();
      if (r > tol) good = false;
      vals.push_back(lam);
      vecs.push_back(std::move(y));
    }
    if (good || final) {
      out.values = std::move(vals);
      out.vectors = std::move(vecs);
      out.ok = good;
    }
    return good;
  };

  for (long j = 0; j < cap; ++j) {
    V.push_back(v);
    apply(v, w);
    const double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (j > 0) w -= beta.back() * V[j - 1];
    orthogonalise(w, locked, V);
    const double b = w.norm();
    scale = std::max(scale, std::abs(a) + b);
    beta.push_back(b);
    out.iterations = j + 1;
    const int m = static_cast<int>(j + 1);
    const bool breakdown = b <= 1e-12 * scale;
    const bool last = j + 1 == cap;
    if (m >= want && (m % 5 == 0 || breakdown || last)) {
      if (ritz(m, last)) return out;
    }
    if (last) break;
    if (breakdown) {
      // invariant subspace exhausted: continue from a fresh direction
      beta.back() = 0.0;
      v = random_vector(n, rng);
      orthogonalise(v, locked, V);
      const double nv = v.norm();
      if (nv < 1e-10) {
        ritz(m, true);
        return out;
      }
      v /= nv;
    } else {
      v = w / b;
    }
  }
  if (out.values.empty() && !alpha.empty()) ritz(static_cast<int>(alpha.size()), true);
  return out;
}

bool is_tridiagonal(const SpMat& H) {
  for (int k = 0; k < H.outerSize(); ++k)
    for (SpMat::InnerIterator it(H, k); it; ++it)
      if (std::abs(it.row() - it.col()) > 1) return false;
  return true;
}

void fill_residuals(Spectrum& s, const ApplyFn& apply) {
  s.residuals.clear();
  RVec hy(s.vectors.rows());
  for (int i = 0; i < s.vectors.cols(); ++i) {
    RVec y = s.vectors.col(i);
    apply(y, hy);
    s.residuals.push_back((hy - s.eigenvalues[i] * y).norm() / y.norm());
  }
}

Spectrum solve_dense(const SpMat& H, int count, const SolverOptions& opt) {
  Eigen::SelfAdjointEigenSolver<RMat> es{RMat(H)};
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
  Spectrum s;
  s.method = "dense";
  s.dim = static_cast<int>(H.rows());
  s.seed = opt.seed;
  const int k = std::min<int>(count, s.dim);
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  s.vectors = es.eigenvectors().leftCols(k);
  return s;
}

Spectrum solve_tridiagonal(const SpMat& H, int count, const SolverOptions& opt) {
  const int n = static_cast<int>(H.rows());
  const int k = std::min(count, n);
  std::vector<double> d(n), e(std::max(n, 1), 0.0);
  for (int i = 0; i < n; ++i) {
    d[i] = H.coeff(i, i);
    if (i + 1 < n) e[i] = H.coeff(i + 1, i);
  }
  std::vector<double> w(n), z(std::size_t(n) * k);
  std::vector<lapack_int> isuppz(2 * std::max(k, 1));
  lapack_int m = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k, 0.0, &m,
                                   w.data(), z.data(), n, isuppz.data());
  if (info != 0 || m != k) throw ConvergenceError("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  Spectrum s;
  s.method = "tridiagonal";
  s.dim = n;
  s.seed = opt.seed;
  s.eigenvalues.assign(w.begin(), w.begin() + k);
  s.vectors = Eigen::Map<RMat>(z.data(), n, k);
  return s;
}

}  // namespace

Spectrum lanczos_lowest(const ApplyFn& apply, int dim, int count, const SolverOptions& opt,
                        const ApplyFn& residual_apply) {
  if (count < 1) throw ValidationError("count must be at least 1");
  if (count > dim) throw ValidationError("count exceeds the operator dimension");
  const ApplyFn& resid = residual_apply ? residual_apply : apply;
  const bool transformed = static_cast<bool>(residual_apply);
  std::mt19937_64 rng(opt.seed);
  const long cap_total = opt.max_iterations > 0
                             ? opt.max_iterations
                             : static_cast<long>(std::ceil(50.0 * count * std::sqrt(double(dim))));
  long used = 0;
  std::vector<RVec> locked;
  std::vector<double> lvals;
  bool ok = true;

  // harvest until `count` pairs are locked
  while (static_cast<int>(locked.size()) < count && used < cap_total) {
    const int want = count - static_cast<int>(locked.size());
    auto r = lanczos_run(apply, resid, dim, want, opt.tol, rng, locked, cap_total - used, transformed);
    used += r.iterations;
    if (r.vectors.empty()) break;
    if (!r.ok) ok = false;
    for (std::size_t i = 0; i < r.vectors.size(); ++i) {
      locked.push_back(r.vectors[i]);
      lvals.push_back(r.values[i]);
    }
    if (!r.ok) break;
  }
  // confirm nothing lower hides in the complement (degenerate partners)
  while (ok && static_cast<int>(locked.size()) == count && static_cast<int>(locked.size()) < dim &&
         used < cap_total) {
    auto r = lanczos_run(apply, resid, dim, 1, opt.tol, rng, locked, cap_total - used, transformed);
    used += r.iterations;
    if (r.vectors.empty() || !r.ok) {
      ok = false;
      break;
    }
    auto top = std::max_element(lvals.begin(), lvals.end());
    const double thr = *top - 1e-10 * (1.0 + std::abs(*top));
    if (!(r.values[0] < thr)) break;
    const auto pos = top - lvals.begin();
    locked.erase(locked.begin() + pos);
    lvals.erase(lvals.begin() + pos);
    // re-orthogonalise the newcomer against the kept set
    RVec y = r.vectors[0];
    orthogonalise(y, locked, {});
    locked.push_back(y.normalized());
    lvals.push_back(r.values[0]);
  }
  if (used >= cap_total && static_cast<int>(locked.size()) < count) ok = false;

  Spectrum s;
  s.method = transformed ? "lanczos-shift-invert" : "lanczos";
  s.dim = dim;
  s.seed = opt.seed;
  s.iterations = used;
  s.converged = ok && static_cast<int>(locked.size()) == count;
  if (locked.empty()) return s;
  // Rayleigh-Ritz on the locked set
  const int k = static_cast<int>(locked.size());
  RMat Q(dim, k);
  for (int i = 0; i < k; ++i) Q.col(i) = locked[i];
  Eigen::HouseholderQR<RMat> qr(Q);
  Q = qr.householderQ() * RMat::Identity(dim, k);
  RMat HQ(dim, k);
  RVec tmp(dim);
  for (int i = 0; i < k; ++i) {
    resid(Q.col(i), tmp);
    HQ.col(i) = tmp;
  }
  RMat T = Q.transpose() * HQ;
  T = 0.5 * (T + T.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(T);
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  s.vectors = Q * es.eigenvectors();
  fill_residuals(s, resid);
  for (double r : s.residuals)
    if (r > opt.tol) s.converged = false;
  return s;
}

Spectrum solve_lowest(const Eigen::SparseMatrix<double>& H, int count, const SolverOptions& opt) {
  const int n = static_cast<int>(H.rows());
  if (count < 1) throw ValidationError("count must be at least 1");
  if (count > n) throw ValidationError("count exceeds the operator dimension");
  Method m = opt.method;
  if (m == Method::Auto) m = is_tridiagonal(H) ? Method::Tridiagonal : (n <= 3000 ? Method::Dense : Method::Lanczos);
  if (m == Method::Tridiagonal && !is_tridiagonal(H)) throw ValidationError("operator is not tridiagonal");
  ApplyFn happly = [&H](const RVec& x, RVec& y) { y.noalias() = H * x; };

  Spectrum s;
  if (m == Method::Dense) {
    s = solve_dense(H, count, opt);
  } else if (m == Method::Tridiagonal) {
    s = solve_tridiagonal(H, count, opt);
  } else if (!(opt.shift_invert || n > 20000)) {
    return lanczos_lowest(happly, n, count, opt);
  } else {
    // sigma below the spectrum, certified by the inertia of LDL^T
    std::mt19937_64 rng(opt.seed);
    auto pr = lanczos_run(happly, happly, n, 1, 1e300, rng, {}, std::min<long>(80, n), false);
    const double theta = pr.values.empty() ? 0.0 : pr.values[0];
    SpMat I(n, n);
    I.setIdentity();
    Eigen::SimplicialLDLT<SpMat> ldlt;
    auto negatives = [&](double sig) -> long {
      ldlt.compute(H - sig * I);
      if (ldlt.info() != Eigen::Success) return n;
      const RVec D = ldlt.vectorD();
      return (D.array() <= 0.0).count();
    };
    double delta = 1e-2 * (1.0 + std::abs(theta));
    double hi = theta, lo = theta - delta;
    int guard = 0;
    while (negatives(lo) > 0) {
      hi = lo;
      delta *= 4.0;
      lo = theta - delta;
      if (++guard > 60) throw ConvergenceError("could not place a shift below the spectrum");
    }
    for (int b = 0; b < 12 && hi - lo > 1e-2 * (1.0 + std::abs(hi)); ++b) {
      const double mid = 0.5 * (lo + hi);
      if (negatives(mid) == 0)
        lo = mid;
      else
        hi = mid;
    }
    negatives(lo);
    const double sigma = lo;
    ApplyFn si = [&ldlt](const RVec& x, RVec& y) { y = -ldlt.solve(x); };
    s = lanczos_lowest(si, n, count, opt, happly);
    s.sigma = sigma;
    return s;
  }
  s.seed = opt.seed;
  fill_residuals(s, happly);
  for (double r : s.residuals)
    if (r > opt.tol) s.converged = false;
  return s;
}

Spectrum solve_lowest(const ReducedOperator& op, int count, const SolverOptions& opt) {
  return solve_lowest(op.H, count, opt);
}

cplx weighted_inner_product(const ReducedAmplitude& f1, const ReducedAmplitude& f2, const RVec& weight,
                            double cell_volume) {
  if (f1.values.size() != f2.values.size() || f1.sector.fiber_dim() != f2.sector.fiber_dim() ||
      f1.nodes() != f2.nodes())
    throw ValidationError("inner product needs matching grids and fibers");
  if (weight.size() != f1.nodes()) throw ValidationError("weight length does not match the grid");
  const int fd = f1.sector.fiber_dim();
  cplx acc = 0.0;
  for (long i = 0; i < f1.nodes(); ++i) {
    cplx t = 0.0;
    for (int r = 0; r < fd; ++r) t += std::conj(f1.values[i * fd + r]) * f2.values[i * fd + r];
    acc += weight[i] * t;
  }
  return acc * cell_volume / double(fd);
}

cplx weighted_inner_product(const ReducedAmplitude& f1, const ReducedAmplitude& f2, ModelKind kind) {
  RVec w(f1.nodes());
  for (long i = 0; i < f1.nodes(); ++i) w[i] = weight_factor(f1.grid.coords(i), kind);
  double vol = 1.0;
  for (const auto& a : f1.grid.axes) vol *= a.spacing();
  return weighted_inner_product(f1, f2, w, vol);
}

ReducedAmplitude amplitude_from_vector(const ReducedOperator& op, const RVec& g) {
  if (g.size() != op.dim()) throw ValidationError("vector length does not match the operator");
  ReducedAmplitude f(op.sector, op.grid);
  const int fd = op.fiber_dim;
  for (std::size_t a = 0; a < op.active.size(); ++a) {
    const double s = 1.0 / std::sqrt(op.weight[a]);
    for (int r = 0; r < fd; ++r) f.values[op.active[a] * fd + r] = g[a * fd + r] * s;
  }
  return f;
}

RVec full_weight(const ReducedOperator& op) {
  RVec w = RVec::Zero(op.grid.total_nodes());
  for (std::size_t a = 0; a < op.active.size(); ++a) w[op.active[a]] = op.weight[a];
  return w;
}

double observed_order(double e0, double e1, double e2, double ratio) {
  const double d1 = e0 - e1, d2 = e1 - e2;
  if (d2 == 0.0 || d1 == 0.0 || (d1 > 0) != (d2 > 0)) return std::nan("");
  return std::log(std::abs(d1 / d2)) / std::log(ratio);
}

double richardson(const std::vector<double>& v, double ratio, double order) {
  const std::size_t n = v.size();
  if (n < 3 || !std::isfinite(order)) return v.back();
  const double p = std::max(1.0, std::round(order));
  const double f1 = std::pow(ratio, p), f2 = std::pow(ratio, p + 1.0);
  const double r0 = v[n - 2] + (v[n - 2] - v[n - 3]) / (f1 - 1.0);
  const double r1 = v[n - 1] + (v[n - 1] - v[n - 2]) / (f1 - 1.0);
  return r1 + (r1 - r0) / (f2 - 1.0);
}

ConvergenceReport convergence_study(const OperatorFactory& factory, const std::vector<int>& resolutions,
                                    const std::vector<double>& boxes, int count, const SolverOptions& opt) {
  if (resolutions.size() < 3) throw ValidationError("convergence study needs at least 3 resolutions");
  if (boxes.empty()) throw ValidationError("convergence study needs at least one box");
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] <= resolutions[i - 1]) throw ValidationError("resolutions must increase");
  ConvergenceReport rep;
  auto run = [&](int res, double box) {
    auto sp = solve_lowest(factory(res, box), count, opt);
    if (!sp.converged) throw ConvergenceError("solver did not converge at resolution " + std::to_string(res));
    rep.rows.push_back({res, box, sp.eigenvalues});
  };
  for (int r : resolutions) run(r, boxes[0]);
  const std::size_t nr = resolutions.size();
  const double ratio = double(resolutions[nr - 1]) / resolutions[nr - 2];
  for (int i = 0; i < count; ++i) {
    std::vector<double> seq;
    for (std::size_t k = 0; k < nr; ++k) seq.push_back(rep.rows[k].values[i]);
    const double p = observed_order(seq[nr - 3], seq[nr - 2], seq[nr - 1], ratio);
    rep.observed_order.push_back(p);
    rep.extrapolated.push_back(richardson(seq, ratio, p));
  }
  for (std::size_t b = 1; b < boxes.size(); ++b) run(resolutions.back(), boxes[b]);
  if (boxes.size() > 1) {
    const auto& a = rep.rows[rep.rows.size() - 2].values;
    const auto& c = rep.rows.back().values;
    for (int i = 0; i < count; ++i) rep.box_change.push_back(std::abs(c[i] - a[i]));
  }
  return rep;
}

}  // namespace affq
