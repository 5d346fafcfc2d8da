#include "affq/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace affq {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::isfinite(v) ? std::stod(fmt12(v)) : v; }

namespace {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(round12(v)) : ojson(nullptr); }

ojson numbers(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

void comment_block(std::ostream& os, const ojson& meta) {
  if (meta.is_null()) return;
  os << "# " << meta.dump() << "\n";
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + " from '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ValidationError("cannot parse " + what + " from '" + s + "'");
  return v;
}

}  // namespace

ojson spectrum_json(const Spectrum& s) {
  ojson j;
  j["method"] = s.method;
  j["dim"] = s.dim;
  j["iterations"] = s.iterations;
  j["seed"] = s.seed;
  j["converged"] = s.converged;
  if (s.sigma != 0.0) j["shift"] = number_or_null(s.sigma);
  j["eigenvalues"] = numbers(s.eigenvalues);
  j["residuals"] = numbers(s.residuals);
  return j;
}

ojson convergence_json(const ConvergenceReport& r) {
  ojson j;
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    ojson o;
    o["resolution"] = row.resolution;
    o["box"] = number_or_null(row.box);
    o["values"] = numbers(row.values);
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["extrapolated"] = numbers(r.extrapolated);
  j["observed_order"] = numbers(r.observed_order);
  j["box_change"] = numbers(r.box_change);
  return j;
}

ojson grid_json(const GridSpec& g) {
  ojson j;
  j["offset"] = g.offset;
  ojson axes = ojson::array();
  for (const auto& a : g.axes) axes.push_back({{"min", a.min}, {"max", a.max}, {"points", a.points}});
  j["axes"] = axes;
  return j;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s, const ojson& meta) {
  comment_block(os, meta);
  os << "level,energy,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    os << i << "," << fmt12(s.eigenvalues[i]) << ",";
    os << (i < s.residuals.size() ? fmt12(s.residuals[i]) : std::string("nan")) << "\n";
  }
}

void write_coo(std::ostream& os, const Eigen::SparseMatrix<double>& H, const ojson& meta) {
  comment_block(os, meta);
  os << H.rows() << " " << H.cols() << " " << H.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < H.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << it.row() << " " << it.col() << " " << buf << "\n";
    }
}

Eigen::SparseMatrix<double> read_coo(std::istream& is) {
  std::string line;
  long rows = -1, cols = -1, nnz = -1;
  std::vector<Eigen::Triplet<double>> trip;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (rows < 0) {
      if (!(ls >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw ValidationError("COO header must be 'rows cols nnz'");
      continue;
    }
    long r, c;
    double v;
    if (!(ls >> r >> c >> v) || r < 0 || r >= rows || c < 0 || c >= cols)
      throw ValidationError("malformed COO entry '" + line + "'");
    trip.emplace_back(r, c, v);
  }
  if (rows < 0) throw ValidationError("empty COO stream");
  if (static_cast<long>(trip.size()) != nnz) throw ValidationError("COO entry count does not match the header");
  Eigen::SparseMatrix<double> H(rows, cols);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

Potential PotentialSpec::invariant() const {
  if (kind == "none") return nullptr;
  const double k = kappa;
  if (kind == "harmonic") return [k](const RVec& q) { return 0.5 * k * q.squaredNorm(); };
  return [k](const RVec& q) {
    const double s = q.mean();
    return 0.5 * k * s * s;
  };
}

double PotentialSpec::dilatational(double q) const {
  if (kind == "none") return 0.0;
  // harmonic: (kappa/2)(q1^2 + q2^2) = kappa q^2 + kappa x^2/4
  return kind == "harmonic" ? kappa * q * q : 0.5 * kappa * q * q;
}

double PotentialSpec::shear(double x) const { return kind == "harmonic" ? 0.25 * kappa * x * x : 0.0; }

std::string PotentialSpec::str() const { return kind == "none" ? kind : kind + ":kappa=" + fmt12(kappa); }

PotentialSpec parse_potential(const std::string& text) {
  PotentialSpec p;
  if (text == "none" || text.empty()) return p;
  const auto colon = text.find(':');
  p.kind = text.substr(0, colon);
  if (p.kind != "harmonic" && p.kind != "dilatational")
    throw ValidationError("unknown potential '" + p.kind + "' (none, harmonic:kappa=K, dilatational:kappa=K)");
  if (colon == std::string::npos) throw ValidationError("potential '" + p.kind + "' needs kappa=K");
  const std::string rest = text.substr(colon + 1);
  if (rest.rfind("kappa=", 0) != 0) throw ValidationError("potential parameters must read kappa=K");
  p.kappa = parse_number(rest.substr(6), "kappa");
  if (p.kappa < 0) throw ValidationError("kappa must be non-negative");
  return p;
}

GridSpec parse_grid(const std::string& text, double offset) {
  GridSpec g;
  g.offset = offset;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<std::string> f;
    std::stringstream is(item);
    std::string tok;
    while (std::getline(is, tok, ':')) f.push_back(tok);
    if (f.size() != 3) throw ValidationError("grid axis '" + item + "' must read min:max:points");
    Axis a;
    a.min = parse_number(f[0], "axis min");
    a.max = parse_number(f[1], "axis max");
    const double pts = parse_number(f[2], "axis points");
    if (pts != std::floor(pts) || pts < 1 || pts > 1e8) throw ValidationError("axis points must be a positive integer");
    a.points = static_cast<int>(pts);
    g.axes.push_back(a);
  }
  if (g.axes.empty()) throw ValidationError("grid needs at least one axis");
  g.validate();
  return g;
}

std::string grid_to_string(const GridSpec& g) {
  std::string s;
  for (std::size_t i = 0; i < g.axes.size(); ++i) {
    if (i) s += ",";
    s += fmt12(g.axes[i].min) + ":" + fmt12(g.axes[i].max) + ":" + std::to_string(g.axes[i].points);
  }
  return s;
}

}  // namespace affq
