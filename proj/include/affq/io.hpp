#pragma once

#include <iosfwd>
#include <string>

#include "affq/reduced_hamiltonians.hpp"
#include "affq/spectral_solver.hpp"
#include "json.hpp"

namespace affq {

using ojson = nlohmann::ordered_json;

// 12 significant digits
std::string fmt12(double v);
double round12(double v);

// "# " comment lines carrying the resolved config, then level,energy,residual
void write_spectrum_csv(std::ostream& os, const Spectrum& s, const ojson& meta);
ojson spectrum_json(const Spectrum& s);
ojson convergence_json(const ConvergenceReport& r);
ojson grid_json(const GridSpec& g);

// coordinate list: comment lines, "rows cols nnz", then "row col value" per entry (0-based)
void write_coo(std::ostream& os, const Eigen::SparseMatrix<double>& H, const ojson& meta);
Eigen::SparseMatrix<double> read_coo(std::istream& is);

// "none", "harmonic:kappa=K" (kappa/2 sum q_a^2), "dilatational:kappa=K" (kappa/2 (sum q_a / n)^2)
struct PotentialSpec {
  std::string kind = "none";
  double kappa = 0.0;

  Potential invariant() const;
  // n = 2 split V = V_dil(q) + V_sh(x), q = (q1 + q2)/2, x = q2 - q1
  double dilatational(double q) const;
  double shear(double x) const;
  std::string str() const;
};

PotentialSpec parse_potential(const std::string& text);

// "min:max:points[,min:max:points...]"
GridSpec parse_grid(const std::string& text, double offset = 0.5);
std::string grid_to_string(const GridSpec& g);

}  // namespace affq
