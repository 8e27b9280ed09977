// The bounded limit variable Z*(a): exact cumulants and moments (three
// recurrences plus a truncated-sum oracle), the 9^n moment bound profile, and
// a numeric density/CDF grid from the fixed point a Z* = Z*' + U with a
// certified truncation bound.
#pragma once

#include "partlim/dist.hpp"
#include "partlim/exact.hpp"

#include <cstddef>
#include <filesystem>
#include <vector>

namespace partlim {

// b_a^2 = 3(a^2 - 1); only even powers of b_a enter exact arithmetic.
Rational b_squared(unsigned a);
double support_halfwidth(unsigned a);  // b_a, floating, for grid geometry

// kappa*_{2n} = (B_{2n}/2n) (12(a^2-1))^n / (a^(2n) - 1); unit variance at
// every base.
CumulantSeq limit_cumulants(unsigned a, unsigned n_max);

// All three return v with v[n] = m_{2n}, v[0] = 1.
// rec1: window-integration recurrence, general a.
std::vector<Rational> moments_rec1(unsigned n_max, unsigned a = 2);
// rec2: cumulant-to-moment convolution against kappa*, general a.
std::vector<Rational> moments_rec2(unsigned n_max, unsigned a = 2);
// rec3: Bernoulli-polynomial form; its derivation is specific to base 2.
std::vector<Rational> moments_rec3(unsigned n_max);

// Exact moments of the depth-K truncation sum_{i<=K} U_i / a^i via iterated
// binomial convolution; converges to the recurrence moments as K grows.
std::vector<Rational> moments_from_truncated_sum(unsigned K, unsigned n_max,
                                                 unsigned a = 2);

// (m_{2n})^(1/2n) for n = 1..n_max; bounded by b_a.
std::vector<double> lyapunov_profile(unsigned n_max, unsigned a = 2);

// At large n the limit cumulants are dominated by the first summand U_1/a,
// a uniform on [-b_a/a, b_a/a]: kappa*_{2n} / kappa_{2n}(U_1/a) =
// a^(2n)/(a^(2n) - 1). Report rows of (kappa*, leading uniform term, ratio).
struct UniformComparisonRow {
  unsigned n = 0;
  Rational kappa_limit;
  Rational kappa_uniform;
  Rational ratio;
};
std::vector<UniformComparisonRow> uniform_cumulant_comparison(unsigned a,
                                                              unsigned n_max);

struct LimitLaw {
  unsigned base = 2;
  Rational b_sq;                 // 3(a^2 - 1)
  double b = 0;                  // support half-width carrier
  CumulantSeq cumulants;
  std::vector<Rational> moments; // moments[n] = m_{2n}
};
LimitLaw make_limit_law(unsigned a, unsigned n_max);

// Uniform grid of density/CDF samples. The density is represented by its
// piecewise-linear interpolant; cdf is the cumulative trapezoid of pdf.
struct DensityGrid {
  unsigned base = 2;
  std::size_t grid_m = 0;  // M; grid has M+1 points
  unsigned iters = 0;
  double x0 = 0;           // leftmost point
  double h = 0;            // step
  std::vector<double> pdf;
  std::vector<double> cdf;
  // Certified sup-norm CDF distance to the exact law (truncation coupling
  // times the grid sup of the density).
  double truncation_bound = 0;

  double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
  double pdf_at(double x) const;  // linear interpolation, 0 outside
  double cdf_at(double x) const;  // clamped to [0, 1] outside
  double trapezoid_mass() const;
  double moment(unsigned p) const;  // trapezoid integral of x^p pdf(x)
  double max_pdf() const;
};

// Grid for Z*(a) on [-b_a - h, b_a + h]; grid_M >= 512 and even, and the step
// must resolve the support (h <= b_a/64).
DensityGrid density_grid(unsigned a, std::size_t grid_M, unsigned iters);

// Grid for the normalized variable V*(a) = sum_k V_k / a^k, V_k uniform on
// [0,1]; support [0, 1/(a-1)]. Z*(a) = 2 b_a V*(a) - b_a/(a-1).
DensityGrid vstar_grid(unsigned a, std::size_t grid_M, unsigned iters);

struct ShiftScaleResult {
  double cdf = 0;
  double pdf = 0;
};
// Evaluates the Z*(a) CDF/density at x through the affine map from a V*(a)
// grid. Outside [-b_a, b_a] the CDF clamps to 0/1 and the density to 0.
ShiftScaleResult shift_scale_maps(unsigned a, double x, const DensityGrid& vstar);

// CSV "x,pdf,cdf" plus a JSON sidecar (base, grid_M, iters, truncation_bound)
// at the same path with extension ".json".
void write_density_csv(const DensityGrid& grid, const std::filesystem::path& csv_path);

}  // namespace partlim
