#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "affq/core.hpp"
#include "affq/reduced_hamiltonians.hpp"

namespace affq {

struct SuperselectionReport {
  bool bosonic = false, fermionic = false;
  bool projectable = false;  // exactly one class present
  std::vector<std::string> violations;
  std::vector<SectorLabel> accepted;
};

// (s, j) pairs; half-integer j - s is rejected into `violations`
SuperselectionReport halfness_validate(const std::vector<std::pair<SpinLabel, SpinLabel>>& sectors);

// multilinear in grid coordinates; antisymmetric ghosts carry the Dirichlet zero, zero outside
CMat interpolate(const ReducedAmplitude& f, const RVec& y);

// n = 3: D^s(u) f(y) D^j(v^-1) for each sector
std::vector<CMat> synthesize_sectors(const std::vector<ReducedAmplitude>& amps, const Mat2c& u, const RVec& y,
                                     const Mat2c& v);
// sum over sectors of the (0,0) matrix element
cplx synthesize(const std::vector<ReducedAmplitude>& amps, const Mat2c& u, const RVec& y, const Mat2c& v);

// violation of f(c,...,c) = 0 (alpha != beta) or f(c,...,c) proportional to the identity (alpha = beta)
double degenerate_constraint_check(const ReducedAmplitude& f, double c, const RMat& chart = RMat());

// signed permutation matrices of determinant +1
std::vector<RMat> k_plus_elements(int n);

// max over nodes of |f(pi_W q) - D^alpha(W^-1) f(q) D^beta(W)|; n = 3 takes the smaller of the two lifts
double exchange_symmetry_check(const ReducedAmplitude& f, const RMat& W, const RMat& chart = RMat());

struct MonteCarloEstimate {
  cplx estimate = 0.0;
  double stderr_re = 0, stderr_im = 0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// all amplitudes on one grid; weight = P at every grid node, as for weighted_inner_product
MonteCarloEstimate montecarlo_full_product(const std::vector<ReducedAmplitude>& psi1,
                                           const std::vector<ReducedAmplitude>& psi2, const RVec& weight,
                                           double cell_volume, long samples, std::uint64_t seed);

// sum of weighted_inner_product over matching sectors
cplx reduced_product(const std::vector<ReducedAmplitude>& psi1, const std::vector<ReducedAmplitude>& psi2,
                     const RVec& weight, double cell_volume);

// Haar sample via the inverse CDF F(k) = (k - sin k)/(2 pi) and a uniform axis
Mat2c haar_sample(std::mt19937_64& rng);

// little-endian: int32 n, 2s (m), 2j (n label), dims; f64 offset; per axis f64 min, f64 max, int32 points;
// then (re, im) f64 pairs, node-major then row-major fiber
void write_amplitude(std::ostream& os, const ReducedAmplitude& f);
ReducedAmplitude read_amplitude(std::istream& is);
void write_amplitude_file(const std::string& path, const ReducedAmplitude& f);
ReducedAmplitude read_amplitude_file(const std::string& path);

}  // namespace affq
