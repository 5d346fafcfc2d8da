#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "affq/core.hpp"
#include "affq/reduced_hamiltonians.hpp"
#include "affq/spectral_solver.hpp"

namespace affq {

// Fourier labels of e^{i m alpha} e^{i n beta}
struct PlanarSector {
  int m = 0, n = 0;
  SectorLabel label() const { return SectorLabel::planar(m, n); }
};

struct PlanarState {
  double q = 0, x = 0, p = 0, p_x = 0, p_alpha = 0, p_beta = 0;
};

// q = (q1 + q2)/2, x = q2 - q1
std::pair<double, double> planar_coordinates(double q1, double q2);
std::pair<double, double> planar_inverse(double q, double x);
// p = p1 + p2, p_x = (p2 - p1)/2
std::pair<double, double> planar_momenta(double p1, double p2);
std::pair<double, double> planar_momenta_inverse(double p, double p_x);

// AffAff, MetAff or AffMet
double classical_kinetic(ModelKind kind, const InertialParams& params, const PlanarState& s);

using Potential1D = std::function<double(double)>;

struct PlanarOperators {
  ReducedOperator q_op;  // unit weight, coefficient of -d^2/dq^2 is cD/2 - cS
  ReducedOperator x_op;  // shear chart x = q2 - q1 > 0, weight |sh x| (or |sin x|)
  double q_coefficient = 0;
};

PlanarOperators planar_quantum_operators(ModelKind kind, const InertialParams& params, PlanarSector sector,
                                         const Axis& qaxis, const Axis& xaxis, const Potential1D& v_dil,
                                         const Potential1D& v_sh, Scheme scheme = Scheme::Auto);

ReducedOperator planar_x_operator(ModelKind kind, const InertialParams& params, PlanarSector sector,
                                  const Axis& xaxis, const Potential1D& v_sh, Scheme scheme = Scheme::Auto);

enum class Discreteness { Discrete, Continuous, Marginal };
std::string to_string(Discreteness d);
Discreteness discreteness_criterion(PlanarSector sector);

// rotated chart (Q+, Q-) by default; chamber Q1 > |Q2|
ReducedOperator dalembert_planar(const InertialParams& params, PlanarSector sector, const GridSpec& grid,
                                 const Potential& v, Chart chart = Chart::Rotated, Scheme scheme = Scheme::Auto);

struct PlanarCoordinates {
  double q_plus = 0, q_minus = 0;  // (Q1 +- Q2)/sqrt 2
  double r = 0, phi = 0;           // polar in the (Q+, Q-) plane, phi in [0, 2pi)
  double rho = 0, lambda = 0;      // Q+ = ch rho cos lambda, Q- = sh rho sin lambda; rho >= 0, lambda in [0, 2pi)
};

PlanarCoordinates coordinate_transforms(double Q1, double Q2);
std::pair<double, double> rotated_inverse(double q_plus, double q_minus);
std::pair<double, double> polar_inverse(double r, double phi);
std::pair<double, double> elliptic_coordinates(double q_plus, double q_minus);
std::pair<double, double> elliptic_inverse(double rho, double lambda);

struct ScanEntry {
  int m = 0, n = 0;
  double lowest = 0;
};

struct GeodeticScan {
  std::vector<ScanEntry> entries;
  ScanEntry minimum;
};

// lowest x-level of every sector |m|, |n| <= M with V = 0; the free q motion adds [0, inf)
GeodeticScan geodetic_scan(ModelKind kind, const InertialParams& params, int M, const Axis& xaxis,
                           const SolverOptions& opt = {});

}  // namespace affq
