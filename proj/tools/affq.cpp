// affq: spectra and checks for quantized affinely-rigid bodies
#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "affq/acceptance.hpp"
#include "affq/halfspin_reps.hpp"
#include "affq/io.hpp"
#include "affq/peterweyl.hpp"
#include "affq/planar_models.hpp"
#include "affq/rotgroup_geometry.hpp"

using namespace affq;

namespace {

struct Global {
  std::uint64_t seed = 20240531;
  double scale = 1.0;
};

ojson config_value(const CLI::Option* o) {
  if (o->get_expected_min() == 0) return o->count() > 0 && o->as<bool>();
  std::string v;
  if (o->count()) {
    for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
  } else {
    v = o->get_default_str();
  }
  if (o->get_expected_max() == 1 && !v.empty()) {
    std::size_t pos = 0;
    try {
      if (v[0] != '-') {
        const unsigned long long u = std::stoull(v, &pos);
        if (pos == v.size()) return u;
      } else {
        const long long i = std::stoll(v, &pos);
        if (pos == v.size()) return i;
      }
    } catch (const std::exception&) {
    }
    try {
      const double d = std::stod(v, &pos);
      if (pos == v.size() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
  }
  return v;
}

// every option of the root and the active subcommand after flags, file and defaults are merged
ojson resolved_config(const CLI::App& app, const CLI::App& sub) {
  ojson j;
  j["subcommand"] = sub.get_name();
  for (const CLI::App* a : {&app, &sub})
    for (const CLI::Option* o : a->get_options()) {
      if (o->get_lnames().empty()) continue;
      const std::string& name = o->get_lnames().front();
      if (name == "help") continue;
      if (name == "config") {
        if (o->count()) j["config"] = o->as<std::string>();
        continue;
      }
      j[name] = config_value(o);
    }
  return j;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw ValidationError("write to '" + path + "' failed");
}

ojson complex_matrix(const CMat& m) {
  ojson rows = ojson::array();
  for (int r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || !std::isfinite(v)) throw ValidationError("cannot parse " + what + " '" + text + "'");
    out.push_back(v);
  }
  return out;
}

Spectrum scaled(Spectrum s, double scale) {
  for (auto& e : s.eigenvalues) e *= scale;
  for (auto& r : s.residuals) r *= scale;
  return s;
}

SolverOptions solver_options(const std::string& method, double tol, bool shift_invert, long max_iterations,
                             std::uint64_t seed) {
  SolverOptions opt;
  opt.method = parse_method(method);
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
  if (max_iterations < 0) throw ValidationError("max-iterations must be non-negative");
  opt.tol = tol;
  opt.shift_invert = shift_invert;
  opt.max_iterations = max_iterations;
  opt.seed = seed;
  return opt;
}

// grid with every axis refined to `resolution` points along axis 0 (others in proportion) and
// stretched by `box` about the origin
GridSpec rescaled(const GridSpec& g, int resolution, double box) {
  GridSpec out = g;
  const int base = g.axes[0].points;
  for (auto& a : out.axes) {
    a.points = std::max(1, static_cast<int>(std::lround(double(a.points) * resolution / base)));
    a.min *= box;
    a.max *= box;
  }
  return out;
}

std::vector<int> resolution_ladder(int points) {
  if (points % 4 != 0 || points < 20)
    throw ValidationError("convergence study needs axis-0 points divisible by 4 and at least 20");
  return {points / 4, points / 2, points};
}

// ------------------------------------------------------------------ reps

struct RepsArgs {
  std::string spin = "1/2";
  std::string k;
  std::string output;

  void setup(CLI::App& c) {
    c.add_option("--spin", spin, "spin label s (e.g. 1/2, 1, 3/2)");
    c.add_option("--k", k, "rotation vector kx,ky,kz for D^s = exp(-i k.S); omit to dump S only");
    c.add_option("--output,-o", output, "JSON output path (stdout if empty)");
  }

  int run(const ojson& config) const {
    const SpinLabel s = parse_spin(spin);
    const auto sm = build_spin_matrices(s);
    ojson j;
    j["config"] = config;
    j["spin"] = s.str();
    j["twice_s"] = s.twice;
    j["dim"] = s.dim();
    j["S"] = ojson::array();
    for (int a = 0; a < 3; ++a) j["S"].push_back(complex_matrix(sm.S[a]));
    if (!k.empty()) {
      const auto kv = parse_vector(k, "rotation vector");
      if (kv.size() != 3) throw ValidationError("rotation vector needs three components");
      const Vec3 kk(kv[0], kv[1], kv[2]);
      j["k"] = kv;
      j["wigner_d"] = complex_matrix(wigner_d(sm, kk));
      j["parity_factor"] = parity_factor(s, su2_from_rotation_vector(kk));
    }
    emit(output, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return 0;
  }
};

// ------------------------------------------------------------------ geometry-check

struct GeometryArgs {
  int samples = 100;
  int level = 8;
  std::string output;

  void setup(CLI::App& c) {
    c.add_option("--samples", samples, "pseudo-random group elements per check")->check(CLI::PositiveNumber);
    c.add_option("--level", level, "starting quadrature level of the doubling chain")
        ->check(CLI::Range(2, 64));
    c.add_option("--output,-o", output, "JSON output path (stdout if empty)");
  }

  int run(const ojson& config, std::uint64_t seed) const {
    const auto checks = geometry_invariant_suite(seed, samples, level);
    ojson j;
    j["config"] = config;
    j["seed"] = seed;
    j["checks"] = ojson::array();
    bool ok = true;
    for (const auto& c : checks) {
      j["checks"].push_back({{"check", c.check}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
      ok = ok && c.pass;
    }
    j["pass"] = ok;
    emit(output, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return ok ? 0 : 1;
  }
};

// ------------------------------------------------------------------ spectrum

GridSpec staggered(double lo, double hi, int points, int dims, double offset) {
  GridSpec g;
  g.offset = offset;
  const double h = (hi - lo) / points;
  for (int d = 0; d < dims; ++d) g.axes.push_back(Axis{lo + d * h / dims, hi + d * h / dims, points});
  return g;
}

GridSpec default_grid(ModelKind kind, int n, Chart chart, double offset) {
  const bool compact = kind == ModelKind::UnitaryGroup;
  const int pts = n == 2 ? 96 : n == 3 ? 16 : 8;
  GridSpec g;
  g.offset = offset;
  switch (chart) {
    case Chart::Invariants:
      return compact ? staggered(-0.5 * pi, 0.5 * pi, pts, n, offset) : staggered(-4.0, 4.0, pts, n, offset);
    case Chart::Planar:
      g.axes = {Axis{-6.0, 6.0, pts}, Axis{0.0, compact ? pi : 8.0, pts}};
      return g;
    case Chart::Rotated:
      g.axes = {Axis{0.0, 6.5, pts}, Axis{0.0, 6.5, pts}};
      return g;
    case Chart::Shear:
      for (int d = 0; d < n - 1; ++d) g.axes.push_back(Axis{0.0, compact ? pi : 8.0, pts});
      return g;
  }
  return g;
}

struct SpectrumArgs {
  std::string kind = "aff-aff";
  int n = 2;
  double I = 2.0, A = 1.0, B = 0.5;
  int m = 0, n_label = 0;
  std::string s = "0", j = "0";
  std::string grid, chart = "invariants", scheme = "auto";
  double offset = 0.5;
  std::string potential = "none";
  int count = 4;
  double tol = 1e-8;
  std::string method = "auto";
  bool shift_invert = false;
  long max_iterations = 0;
  std::string format = "csv", output, json, coo, amplitude_out;
  bool convergence = false;
  double box_scale = 2.0;

  void setup(CLI::App& c) {
    c.add_option("--kind", kind, "aff-aff, met-aff, aff-met, dalembert or unitary");
    c.add_option("--n", n, "body dimension")->check(CLI::Range(2, 8));
    c.add_option("--I", I, "inertial constant I");
    c.add_option("--A", A, "inertial constant A");
    c.add_option("--B", B, "inertial constant B");
    c.add_option("--m", m, "n = 2 Fourier label m");
    c.add_option("--n-label", n_label, "n = 2 Fourier label n");
    c.add_option("--s", s, "n = 3 spin label s");
    c.add_option("--j", j, "n = 3 vorticity label j");
    c.add_option("--grid", grid, "min:max:points per axis, comma separated (chart-dependent default if empty)");
    c.add_option("--chart", chart, "invariants, planar, rotated or shear");
    c.add_option("--scheme", scheme, "auto, divergence or flat");
    c.add_option("--offset", offset, "node offset in units of the spacing")->check(CLI::Range(0.0, 1.0));
    c.add_option("--potential", potential, "none, harmonic:kappa=K or dilatational:kappa=K");
    c.add_option("--count", count, "number of lowest levels")->check(CLI::PositiveNumber);
    c.add_option("--tol", tol, "residual tolerance ||H v - E v||");
    c.add_option("--method", method, "auto, dense, tridiagonal or lanczos");
    c.add_flag("--shift-invert", shift_invert, "Lanczos on the shifted inverse");
    c.add_option("--max-iterations", max_iterations, "Lanczos iteration cap (0: automatic)");
    c.add_option("--format", format, "stdout format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    c.add_option("--output,-o", output, "spectrum output path (stdout if empty)");
    c.add_option("--json", json, "also write the JSON report here");
    c.add_option("--coo", coo, "export the assembled operator as a coordinate list");
    c.add_option("--amplitude-out", amplitude_out, "write the ground-state reduced amplitude (binary)");
    c.add_flag("--convergence", convergence, "resolution ladder N/4, N/2, N plus one enlarged box");
    c.add_option("--box-scale", box_scale, "box stretch factor of the convergence study")->check(CLI::Range(1.0, 16.0));
  }

  int run(const ojson& config, const Global& g) const {
    const ModelKind mk = parse_kind(kind);
    InertialParams p;
    p.I = I;
    p.A = A;
    p.B = B;
    p.n = n;
    p.validate(mk);
    if (n != 2 && (m != 0 || n_label != 0)) throw ValidationError("--m and --n-label apply to n = 2 only");
    if (n != 3 && (s != "0" || j != "0")) throw ValidationError("--s and --j apply to n = 3 only");
    const SectorLabel sec = n == 2   ? SectorLabel::planar(m, n_label)
                            : n == 3 ? SectorLabel::spinor(parse_spin(s), parse_spin(j))
                                     : SectorLabel::scalar(n);
    const Chart ch = parse_chart(chart);
    const AssembleOptions aopt{ch, parse_scheme(scheme)};
    const GridSpec gs = grid.empty() ? default_grid(mk, n, ch, offset) : parse_grid(grid, offset);
    gs.validate();
    const PotentialSpec pot = parse_potential(potential);
    const SolverOptions opt = solver_options(method, tol, shift_invert, max_iterations, g.seed);
    const std::vector<int> ladder = convergence ? resolution_ladder(gs.axes[0].points) : std::vector<int>{};

    const ReducedOperator op = assemble(mk, p, sec, gs, pot.invariant(), aopt);
    const Spectrum sp = solve_lowest(op, count, opt);

    ojson meta;
    meta["config"] = config;
    meta["seed"] = g.seed;
    meta["kind"] = to_string(mk);
    meta["sector"] = sec.str();
    meta["chart"] = to_string(ch);
    meta["scheme"] = to_string(op.scheme);
    meta["potential"] = pot.str();
    meta["grid"] = grid_json(gs);
    meta["dim"] = op.dim();
    meta["energy_scale"] = g.scale;

    ojson report = meta;
    report["spectrum"] = spectrum_json(scaled(sp, g.scale));
    if (convergence) {
      const auto factory = [&](int res, double box) {
        return assemble(mk, p, sec, rescaled(gs, res, box), pot.invariant(), aopt).H;
      };
      auto conv = convergence_study(factory, ladder, {1.0, box_scale}, count, opt);
      for (auto& row : conv.rows)
        for (auto& v : row.values) v *= g.scale;
      for (auto& v : conv.extrapolated) v *= g.scale;
      for (auto& v : conv.box_change) v *= g.scale;
      report["convergence"] = convergence_json(conv);
    }

    if (format == "json")
      emit(output, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    else
      emit(output, [&](std::ostream& os) { write_spectrum_csv(os, scaled(sp, g.scale), meta); });
    if (!json.empty()) emit(json, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    if (!coo.empty()) emit(coo, [&](std::ostream& os) { write_coo(os, op.H, meta); });
    if (!amplitude_out.empty() && !sp.eigenvalues.empty())
      write_amplitude_file(amplitude_out, amplitude_from_vector(op, sp.vectors.col(0)));
    if (!sp.converged) {
      std::cerr << "affq: solver did not reach tolerance " << fmt12(tol) << "\n";
      return 2;
    }
    return 0;
  }
};

// ------------------------------------------------------------------ planar

struct PlanarArgs {
  std::string kind = "aff-aff";
  double I = 2.0, A = 1.0, B = 0.5;
  int m = 1, n_label = 2;
  std::string grid;
  std::string potential = "none";
  std::string scheme = "auto";
  int count = 5;
  double tol = 1e-8;
  std::string method = "auto";
  bool shift_invert = false;
  std::string output, json;
  bool convergence = false;
  double box_scale = 2.0;

  void setup(CLI::App& c) {
    c.add_option("--kind", kind, "aff-aff, met-aff, aff-met, unitary or dalembert");
    c.add_option("--I", I, "inertial constant I");
    c.add_option("--A", A, "inertial constant A");
    c.add_option("--B", B, "inertial constant B");
    c.add_option("--m", m, "Fourier label m");
    c.add_option("--n,--n-label", n_label, "Fourier label n");
    c.add_option("--grid", grid,
                 "q-axis,x-axis as min:max:points (dalembert: Q+,Q- axes); kind-dependent default if empty");
    c.add_option("--potential", potential, "none, harmonic:kappa=K or dilatational:kappa=K");
    c.add_option("--scheme", scheme, "auto, divergence or flat");
    c.add_option("--count", count, "number of lowest levels")->check(CLI::PositiveNumber);
    c.add_option("--tol", tol, "residual tolerance");
    c.add_option("--method", method, "auto, dense, tridiagonal or lanczos");
    c.add_flag("--shift-invert", shift_invert, "Lanczos on the shifted inverse");
    c.add_option("--output,-o", output, "CSV output path (stdout if empty)");
    c.add_option("--json", json, "also write the JSON report here");
    c.add_flag("--convergence", convergence, "resolution ladder and box enlargement of the x (or 2D) operator");
    c.add_option("--box-scale", box_scale, "box stretch factor of the convergence study")->check(CLI::Range(1.0, 16.0));
  }

  static void write_rows(std::ostream& os, const ojson& meta, const std::string& label, const Spectrum& s) {
    os << "# " << meta.dump() << "\n";
    os << "sector,level,energy,residual\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
      os << label << "," << i << "," << fmt12(s.eigenvalues[i]) << "," << fmt12(s.residuals[i]) << "\n";
  }

  int run(const ojson& config, const Global& g) const {
    const ModelKind mk = parse_kind(kind);
    InertialParams p;
    p.I = I;
    p.A = A;
    p.B = B;
    p.n = 2;
    p.validate(mk);
    const PlanarSector sec{m, n_label};
    const PotentialSpec pot = parse_potential(potential);
    const Scheme sch = parse_scheme(scheme);
    const SolverOptions opt = solver_options(method, tol, shift_invert, 0, g.seed);
    const std::string label = "\"" + sec.label().str() + "\"";

    ojson meta;
    meta["config"] = config;
    meta["seed"] = g.seed;
    meta["kind"] = to_string(mk);
    meta["sector"] = sec.label().str();
    meta["potential"] = pot.str();
    meta["energy_scale"] = g.scale;

    Spectrum total;
    ojson report;
    bool converged = true;
    if (mk == ModelKind::DAlembert) {
      const GridSpec gs = grid.empty() ? parse_grid("0:6.5:100,0:6.5:100") : parse_grid(grid);
      if (gs.dims() != 2) throw ValidationError("dalembert grid needs the Q+ and Q- axes");
      const std::vector<int> ladder = convergence ? resolution_ladder(gs.axes[0].points) : std::vector<int>{};
      const auto op = dalembert_planar(p, sec, gs, pot.invariant(), Chart::Rotated, sch);
      total = solve_lowest(op, count, opt);
      converged = total.converged;
      meta["grid"] = grid_json(gs);
      report = meta;
      report["spectrum"] = spectrum_json(scaled(total, g.scale));
      if (convergence) {
        const auto factory = [&](int res, double box) {
          return dalembert_planar(p, sec, rescaled(gs, res, box), pot.invariant(), Chart::Rotated, sch).H;
        };
        report["convergence"] = convergence_json(convergence_study(factory, ladder, {1.0, box_scale}, count, opt));
      }
    } else {
      const std::string xdefault = mk == ModelKind::UnitaryGroup ? "0:3.14159265358979:2048" : "0:20:2048";
      const GridSpec gs = grid.empty() ? parse_grid("-6:6:1024," + xdefault) : parse_grid(grid);
      if (gs.dims() != 2) throw ValidationError("planar grid needs a q axis and an x axis");
      const std::vector<int> ladder = convergence ? resolution_ladder(gs.axes[1].points) : std::vector<int>{};
      const auto ops = planar_quantum_operators(
          mk, p, sec, gs.axes[0], gs.axes[1], [&](double q) { return pot.dilatational(q); },
          [&](double x) { return pot.shear(x); }, sch);
      const Spectrum sq = solve_lowest(ops.q_op, count, opt);
      const Spectrum sx = solve_lowest(ops.x_op, count, opt);
      converged = sq.converged && sx.converged;
      // separable: total levels are sums of q and x levels
      std::vector<std::tuple<double, double, std::size_t, std::size_t>> sums;
      for (std::size_t a = 0; a < sq.eigenvalues.size(); ++a)
        for (std::size_t b = 0; b < sx.eigenvalues.size(); ++b)
          sums.emplace_back(sq.eigenvalues[a] + sx.eigenvalues[b], sq.residuals[a] + sx.residuals[b], a, b);
      std::sort(sums.begin(), sums.end());
      ojson pairs = ojson::array();
      for (int i = 0; i < count && i < static_cast<int>(sums.size()); ++i) {
        total.eigenvalues.push_back(std::get<0>(sums[i]));
        total.residuals.push_back(std::get<1>(sums[i]));
        pairs.push_back({std::get<2>(sums[i]), std::get<3>(sums[i])});
      }
      meta["grid"] = grid_json(gs);
      meta["q_coefficient"] = ops.q_coefficient;
      meta["discreteness"] = to_string(discreteness_criterion(sec));
      report = meta;
      report["q_spectrum"] = spectrum_json(scaled(sq, g.scale));
      report["x_spectrum"] = spectrum_json(scaled(sx, g.scale));
      report["levels"] = numbers_scaled(total.eigenvalues, g.scale);
      report["level_pairs"] = pairs;
      if (convergence) {
        const auto factory = [&](int res, double box) {
          Axis xa = gs.axes[1];
          xa.points = res;
          xa.min *= box;
          xa.max *= box;
          return planar_x_operator(mk, p, sec, xa, [&](double x) { return pot.shear(x); }, sch).H;
        };
        report["x_convergence"] = convergence_json(convergence_study(factory, ladder, {1.0, box_scale}, count, opt));
      }
    }

    emit(output, [&](std::ostream& os) { write_rows(os, meta, label, scaled(total, g.scale)); });
    if (!json.empty()) emit(json, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    if (!converged) {
      std::cerr << "affq: solver did not reach tolerance " << fmt12(tol) << "\n";
      return 2;
    }
    return 0;
  }

  static ojson numbers_scaled(const std::vector<double>& v, double scale) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(round12(x * scale));
    return a;
  }
};

// ------------------------------------------------------------------ validate-wavefunction

struct ValidateArgs {
  std::vector<std::string> inputs;
  std::string chart = "invariants", kind = "aff-aff";
  double degenerate = std::numeric_limits<double>::quiet_NaN();
  bool exchange = false;
  long mc_samples = 0;
  double tol = 1e-10;
  std::string output;

  void setup(CLI::App& c) {
    c.add_option("--input,-i", inputs, "amplitude files (binary reduced-amplitude format)")->required();
    c.add_option("--chart", chart, "chart the amplitude grids are expressed in");
    c.add_option("--kind", kind, "model kind fixing the weight P");
    c.add_option("--degenerate", degenerate, "check the coincidence constraint at q_a = c");
    c.add_flag("--exchange", exchange, "check exchange symmetry under every signed permutation");
    c.add_option("--mc-samples", mc_samples, "Monte Carlo check of the full-group norm (0: skip)")
        ->check(CLI::NonNegativeNumber);
    c.add_option("--tol", tol, "pass threshold for the degenerate and exchange checks");
    c.add_option("--output,-o", output, "JSON output path (stdout if empty)");
  }

  int run(const ojson& config, const Global& g, const CLI::App& sub) const {
    const ModelKind mk = parse_kind(kind);
    const Chart ch = parse_chart(chart);
    std::vector<ReducedAmplitude> amps;
    for (const auto& path : inputs) amps.push_back(read_amplitude_file(path));

    ojson j;
    j["config"] = config;
    j["seed"] = g.seed;
    bool ok = true;

    std::vector<std::pair<SpinLabel, SpinLabel>> labels;
    for (const auto& f : amps)
      if (f.sector.n == 3) labels.emplace_back(f.sector.alpha, f.sector.beta);
    if (!labels.empty()) {
      const auto rep = halfness_validate(labels);
      j["superselection"] = {{"bosonic", rep.bosonic},
                             {"fermionic", rep.fermionic},
                             {"projectable", rep.projectable},
                             {"violations", rep.violations}};
      ok = ok && rep.violations.empty();
    }

    auto weight_of = [&](const ReducedAmplitude& f, RMat& M, double& vol) {
      const int n = f.sector.n;
      M = chart_matrix(ch, n);
      if (M.cols() != f.grid.dims()) throw ValidationError("amplitude grid does not match the chart");
      RVec w(f.nodes());
      for (long i = 0; i < f.nodes(); ++i) w[i] = weight_factor(M * f.grid.coords(i), mk);
      vol = std::sqrt((M.transpose() * M).determinant());
      for (const auto& a : f.grid.axes) vol *= a.spacing();
      return w;
    };

    ojson files = ojson::array();
    RVec weight;
    double vol = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const auto& f = amps[k];
      RMat M;
      weight = weight_of(f, M, vol);
      ojson e;
      e["path"] = inputs[k];
      e["sector"] = f.sector.str();
      e["grid"] = grid_json(f.grid);
      e["norm"] = round12(std::sqrt(weighted_inner_product(f, f, weight, vol).real()));
      if (sub.count("--degenerate")) {
        const double v = degenerate_constraint_check(f, degenerate, M);
        e["degenerate"] = {{"c", degenerate}, {"violation", v}, {"pass", v <= tol}};
        ok = ok && v <= tol;
      }
      // solver output lives on the Weyl chamber only; its exchange images fall outside the support
      bool chamber_only = true;
      const bool reflected = ch == Chart::Planar || ch == Chart::Shear;
      const long fd = f.sector.fiber_dim();
      for (long i = 0; i < f.nodes() && chamber_only; ++i)
        if (!in_chamber(M * f.grid.coords(i), mk, reflected))
          for (long c = 0; c < fd; ++c)
            if (f.values[i * fd + c] != cplx(0.0)) chamber_only = false;
      e["support"] = chamber_only ? "chamber" : "full";
      if (exchange && chamber_only) {
        e["exchange"] = {{"applicable", false}, {"reason", "amplitude vanishes outside the Weyl chamber"}};
      } else if (exchange) {
        double worst = 0;
        for (const auto& W : k_plus_elements(f.sector.n)) worst = std::max(worst, exchange_symmetry_check(f, W, M));
        e["exchange"] = {{"violation", worst}, {"pass", worst <= tol}};
        ok = ok && worst <= tol;
      }
      files.push_back(e);
    }
    j["files"] = files;

    if (mc_samples > 0) {
      for (const auto& f : amps)
        if (f.grid.dims() != amps[0].grid.dims() || f.grid.total_nodes() != amps[0].grid.total_nodes() ||
            f.sector.n != 3)
          throw ValidationError("Monte Carlo check needs n = 3 amplitudes on one common grid");
      const cplx red = reduced_product(amps, amps, weight, vol);
      const auto mc = montecarlo_full_product(amps, amps, weight, vol, mc_samples, g.seed);
      const double sigma = mc.stderr_re > 0 ? std::abs(mc.estimate.real() - red.real()) / mc.stderr_re : 0.0;
      j["montecarlo"] = {{"samples", mc.samples},
                         {"seed", mc.seed},
                         {"estimate", {mc.estimate.real(), mc.estimate.imag()}},
                         {"stderr", {mc.stderr_re, mc.stderr_im}},
                         {"reduced", {red.real(), red.imag()}},
                         {"sigmas", sigma},
                         {"pass", sigma <= 3.0}};
      ok = ok && sigma <= 3.0;
    }
    j["pass"] = ok;
    emit(output, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return ok ? 0 : 1;
  }
};

// ------------------------------------------------------------------ acceptance

struct AcceptanceArgs {
  std::vector<int> only;
  std::string json;

  void setup(CLI::App& c) {
    c.add_option("--only", only, "criterion ids to run (default: all)")->check(CLI::Range(1, criterion_count));
    c.add_option("--json", json, "write the pass/fail report here");
  }

  int run(const ojson& config, const Global& g) const {
    std::vector<int> ids = only;
    if (ids.empty())
      for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
    ojson j;
    j["config"] = config;
    j["seed"] = g.seed;
    j["criteria"] = ojson::array();
    int passed = 0;
    for (int id : ids) {
      const auto r = run_criterion(id, g.seed);
      std::cout << criterion_line(r) << std::endl;
      j["criteria"].push_back(criterion_json(r));
      passed += r.passed;
    }
    j["passed"] = passed;
    j["total"] = ids.size();
    std::cout << passed << "/" << ids.size() << " criteria passed\n";
    if (!json.empty()) emit(json, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return passed == static_cast<int>(ids.size()) ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affq: spectra and invariant checks for quantized affinely-rigid bodies"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key = value config file ([subcommand] sections); flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "seed of every pseudo-random stream");
  app.add_option("--scale", g.scale, "multiplies reported energies (presentation only)");

  RepsArgs reps;
  GeometryArgs geom;
  SpectrumArgs spectrum;
  PlanarArgs planar;
  ValidateArgs val;
  AcceptanceArgs acc;
  CLI::App* c_reps = app.add_subcommand("reps", "dump spin matrices and Wigner D^s as [re, im] arrays");
  CLI::App* c_geom = app.add_subcommand("geometry-check", "rotation-group invariant suite");
  CLI::App* c_spec = app.add_subcommand("spectrum", "assemble and solve a reduced operator");
  CLI::App* c_plan = app.add_subcommand("planar", "n = 2 separated pipeline");
  CLI::App* c_val = app.add_subcommand("validate-wavefunction", "checks on stored reduced amplitudes");
  CLI::App* c_acc = app.add_subcommand("acceptance", "run the acceptance suite");
  reps.setup(*c_reps);
  geom.setup(*c_geom);
  spectrum.setup(*c_spec);
  planar.setup(*c_plan);
  val.setup(*c_val);
  acc.setup(*c_acc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (c_reps->parsed()) return reps.run(resolved_config(app, *c_reps));
    if (c_geom->parsed()) return geom.run(resolved_config(app, *c_geom), g.seed);
    if (c_spec->parsed()) return spectrum.run(resolved_config(app, *c_spec), g);
    if (c_plan->parsed()) return planar.run(resolved_config(app, *c_plan), g);
    if (c_val->parsed()) return val.run(resolved_config(app, *c_val), g, *c_val);
    if (c_acc->parsed()) return acc.run(resolved_config(app, *c_acc), g);
  } catch (const ConvergenceError& e) {
    std::cerr << "affq: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "affq: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
