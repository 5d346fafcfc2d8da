#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "affq/core.hpp"
#include "affq/reduced_hamiltonians.hpp"

namespace affq {

enum class Method { Auto, Dense, Tridiagonal, Lanczos };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct SolverOptions {
  Method method = Method::Auto;
  double tol = 1e-8;
  std::uint64_t seed = 20240531;
  bool shift_invert = false;  // Lanczos on (H - sigma)^-1, sigma certified below the spectrum
  long max_iterations = 0;    // 0: 50 count sqrt(dim)
};

struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  RMat vectors;  // columns
  std::string method;
  long iterations = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  bool converged = true;
};

using ApplyFn = std::function<void(const RVec& x, RVec& y)>;

Spectrum solve_lowest(const Eigen::SparseMatrix<double>& H, int count, const SolverOptions& opt = {});
Spectrum solve_lowest(const ReducedOperator& op, int count, const SolverOptions& opt = {});

// matrix-free Lanczos with full reorthogonalisation; `residual_apply` defines the residual contract
Spectrum lanczos_lowest(const ApplyFn& apply, int dim, int count, const SolverOptions& opt,
                        const ApplyFn& residual_apply = nullptr);

// quadrature of Tr(f1^dagger f2) P / (N(alpha) N(beta)) on the offset grid
cplx weighted_inner_product(const ReducedAmplitude& f1, const ReducedAmplitude& f2, const RVec& weight,
                            double cell_volume);
cplx weighted_inner_product(const ReducedAmplitude& f1, const ReducedAmplitude& f2, ModelKind kind);

// f = g / sqrt(P) on chamber nodes, zero outside
ReducedAmplitude amplitude_from_vector(const ReducedOperator& op, const RVec& g);
RVec full_weight(const ReducedOperator& op);

struct ConvergenceRow {
  int resolution = 0;
  double box = 0.0;
  std::vector<double> values;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<double> extrapolated;
  std::vector<double> observed_order;
  std::vector<double> box_change;  // |E(last box) - E(previous box)| at the finest resolution
};

using OperatorFactory = std::function<Eigen::SparseMatrix<double>(int resolution, double box)>;

// resolutions ascending with a constant ratio; rows for every resolution at boxes[0], then the
// finest resolution at each further box
ConvergenceReport convergence_study(const OperatorFactory& factory, const std::vector<int>& resolutions,
                                    const std::vector<double>& boxes, int count, const SolverOptions& opt = {});

// Richardson table over the last three values: eliminates orders p and p + 1
double richardson(const std::vector<double>& values, double ratio, double order);
double observed_order(double e0, double e1, double e2, double ratio);

}  // namespace affq
