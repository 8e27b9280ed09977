// Exact distributional analytics for the partition sums Z_N(a): pmf,
// closed-form mean/variance, MGF evaluation, standardized cumulants, the
// three-series cumulant decomposition identity, and CLT diagnostics.
#pragma once

#include "partlim/coeffs.hpp"
#include "partlim/exact.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace partlim {

// Even-order cumulant sequence; odd orders are identically zero. kappa2n(n)
// is kappa_{2n}; for standardized sequences kappa2n(1) == 1 exactly.
struct CumulantSeq {
  unsigned base = 2;
  std::optional<unsigned> order;  // nullopt marks the N -> infinity limit
  std::vector<Rational> even;     // even[n] = kappa_{2n}, even[0] unused

  unsigned n_max() const { return static_cast<unsigned>(even.size()) - 1; }
  const Rational& kappa2n(unsigned n) const { return even.at(n); }
};

struct DistSummary {
  unsigned base = 2;
  unsigned order = 1;
  Rational mean;
  Rational variance;
  Rational c_squared;  // 9 * variance; equals 4^N - 3N/4 - 1 when a = 2
};

std::vector<Rational> pmf(const CoeffTable& table);

// Closed forms: mean (1/2)[a(a^N-1)/(a-1) - N],
// variance (1/12)[a^2(1-a^(2N))/(1-a^2) - N].
std::pair<Rational, Rational> mean_variance(unsigned a, unsigned N);
DistSummary summarize(unsigned a, unsigned N);

// Var X_j = (a^(2j) - 1)/12 for the j-th summand.
Rational summand_variance(unsigned a, unsigned j);

// MGF of Z_N at t, as the product of discrete-uniform factors
// (e^(t a^k) - 1)/(a^k (e^t - 1)). Throws std::overflow_error when a factor
// leaves floating range.
double mgf_eval(unsigned a, unsigned N, double t);

// MGF of the standardized variable (Z_N - mean)/sigma at t.
double mgf_standardized(unsigned a, unsigned N, double t);

// kappa_{2n} of the standardized sum, exact:
// (B_{2n}/2n) * sum_{j=1..N} (a^(2nj) - 1) / sigma^(2n).
CumulantSeq standardized_cumulants(unsigned a, unsigned N, unsigned n_max);

// The a = 2 closed form with numerator 4^n(4^(nN) - N - 1) + N; used as the
// second route in equality tests.
Rational standardized_cumulant_closed_form(unsigned N, unsigned n);

// Splits kappa_{2n} into the three geometric-series terms and checks the sum
// against the closed form, all over exact rationals (a = 2).
bool cumulant_decomposition_check(unsigned N, unsigned n);

struct CltDiagnostics {
  Rational feller_exact;    // max_j Var X_j / Var Z_N
  Rational lindeberg_exact; // L_N(eps)
  Rational uan_exact;       // max_j max_k P[X_j = k] = 1/a
  double feller_ratio = 0;
  double lindeberg_sum = 0;
  double uan_max_atom = 0;
};

// eps > 0; the Lindeberg indicator is resolved exactly via closed-form
// partial sums over each summand's support, no enumeration.
CltDiagnostics clt_diagnostics(unsigned a, unsigned N, double eps);

// --- moment/cumulant conversions (exact, classical recursions) -------------

// raw[p] = E Z^p from the exact pmf, p = 0..p_max.
std::vector<Rational> raw_moments(const CoeffTable& table, unsigned p_max);

// raw[0] must be 1; returns kappa[0..n] with kappa[0] = 0.
std::vector<Rational> cumulants_from_moments(const std::vector<Rational>& raw);

// kappa[0] ignored; returns raw moments with raw[0] = 1.
std::vector<Rational> moments_from_cumulants(const std::vector<Rational>& kappa);

}  // namespace partlim
