#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "affq/core.hpp"
#include "affq/halfspin_reps.hpp"

namespace affq {

enum class ModelKind { AffAff, MetAff, AffMet, DAlembert, UnitaryGroup };

std::string to_string(ModelKind k);
ModelKind parse_kind(const std::string& s);
bool is_hyperbolic(ModelKind k);

struct InertialParams {
  double I = 0.0, A = 1.0, B = 0.0;
  int n = 2;

  double alpha() const { return I + A; }
  double beta() const { return -(I + A) * (I + A + n * B) / B; }
  double mu() const { return (I * I - A * A) / I; }
  void validate(ModelKind kind) const;
};

// n = 2: Fourier labels (m, nl); n = 3: spin s = alpha, vorticity j = beta; n > 3: scalar only
struct SectorLabel {
  int n = 2;
  SpinLabel alpha, beta;
  int m = 0, nl = 0;

  static SectorLabel planar(int m, int n_label);
  static SectorLabel spinor(SpinLabel s, SpinLabel j);
  static SectorLabel scalar(int n);

  int left_dim() const { return n == 3 ? alpha.dim() : 1; }
  int right_dim() const { return n == 3 ? beta.dim() : 1; }
  int fiber_dim() const { return left_dim() * right_dim(); }
  bool fermionic() const { return n == 3 && alpha.half_integer(); }
  void validate() const;
  std::string str() const;
};

struct Axis {
  double min = 0.0, max = 1.0;
  int points = 5;

  double spacing() const { return (max - min) / points; }
  double node(int i, double offset) const { return min + (i + offset) * spacing(); }
};

// nodes at min + (i + offset) h, h = (max - min)/points; Dirichlet zero half a spacing
// beyond the extreme nodes
struct GridSpec {
  std::vector<Axis> axes;
  double offset = 0.5;

  int dims() const { return static_cast<int>(axes.size()); }
  long total_nodes() const;
  void validate() const;
  std::vector<int> unravel(long index) const;
  long ravel(const std::vector<int>& idx) const;
  RVec coords(long index) const;
};

// q = M y. Invariants: y = q. Planar (n=2): y = (q, x), q1 = q - x/2, q2 = q + x/2.
// Rotated (n=2): y = (Q+, Q-). Shear: Jacobi coordinates y_k = q_{k+1} - mean(q_1..q_k) on sum q = 0.
enum class Chart { Invariants, Planar, Rotated, Shear };

std::string to_string(Chart c);
Chart parse_chart(const std::string& s);
RMat chart_matrix(Chart c, int n);
int chart_dims(Chart c, int n);

enum class Scheme { Auto, Divergence, Flat };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

using Potential = std::function<double(const RVec& q)>;

struct KineticCoeffs {
  double cD = 0;        // coefficient of -Laplacian
  double cS = 0;        // coefficient of (sum_a d_a)^2
  double cF = 1;        // fiber denominator constant (A, alpha or I)
  double constant = 0;  // Casimir constant
};

KineticCoeffs kinetic_coeffs(ModelKind kind, const InertialParams& p, const SectorLabel& sec);

double weight_factor(const RVec& q, ModelKind kind);
// c * sum_a [d_a^2 h + (d_a h)^2], h = ln sqrt(P)
double artificial_potential(const RVec& q, ModelKind kind, double mass_coeff);
bool in_chamber(const RVec& q, ModelKind kind, bool reflected);

CMat left_spin_matrix(const SectorLabel& sec, int axis);
CMat right_spin_matrix(const SectorLabel& sec, int axis);

// real symmetric matrix on the row-major vectorised fiber
RMat fiber_coupling(ModelKind kind, const SectorLabel& sec, const RVec& q, const InertialParams& p);
double casimir_constant(ModelKind kind, const SectorLabel& sec, const InertialParams& p);

struct ReducedAmplitude {
  SectorLabel sector;
  GridSpec grid;
  std::vector<cplx> values;  // node-major, then row-major fiber

  ReducedAmplitude() = default;
  ReducedAmplitude(const SectorLabel& sec, const GridSpec& g);

  long nodes() const { return grid.total_nodes(); }
  CMat at(long node) const;
  void set(long node, const CMat& f);
};

ReducedAmplitude apply_left_spin(int axis, const ReducedAmplitude& f);
ReducedAmplitude apply_right_spin(int axis, const ReducedAmplitude& f);

struct AssembleOptions {
  Chart chart = Chart::Invariants;
  Scheme scheme = Scheme::Auto;
};

struct ReducedOperator {
  ModelKind kind{};
  InertialParams params;
  SectorLabel sector;
  GridSpec grid;
  Chart chart = Chart::Invariants;
  Scheme scheme = Scheme::Divergence;  // resolved
  RMat M;
  std::vector<long> active;  // full-grid index of each unknown node
  std::vector<long> lookup;  // full-grid index -> active index or -1
  std::vector<RVec> q;       // invariants at active nodes
  RVec weight;               // P at active nodes
  int fiber_dim = 1;
  Eigen::SparseMatrix<double> H;  // acts on g = sqrt(P) f

  int dim() const { return static_cast<int>(H.rows()); }
  RVec apply(const RVec& x) const { return H * x; }
  double cell_volume() const;
};

Scheme resolve_scheme(Scheme s, const SectorLabel& sec);

ReducedOperator assemble(ModelKind kind, const InertialParams& params, const SectorLabel& sector,
                         const GridSpec& grid, const Potential& potential, const AssembleOptions& opt = {});

// (n-1)-axis Jacobi grid on sum q = 0; first n-1 axes of the input give the coordinate ranges
GridSpec sl_constraint_project(const GridSpec& grid, int n);

double symmetry_defect(const Eigen::SparseMatrix<double>& H);

}  // namespace affq
