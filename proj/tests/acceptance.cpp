// Acceptance battery: every release-gating property of the library, one
// numbered criterion per function, each printing a single [PASS]/[FAIL] line
// with its runtime. Exits nonzero if any criterion fails.
#include "partlim/coeffs.hpp"
#include "partlim/dist.hpp"
#include "partlim/exact.hpp"
#include "partlim/limitlaw.hpp"
#include "partlim/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace partlim;

namespace {

int g_failures = 0;

struct Criterion {
  int number;
  const char* title;
  double time_limit_s;  // 0 = untimed
};

void run_criterion(const Criterion& c, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.time_limit_s > 0 && elapsed > c.time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  std::printf("[%s] criterion %2d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", c.number,
              c.title, elapsed, detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++g_failures;
}

bool rows_equal(const std::vector<Integer>& row, std::initializer_list<long> want) {
  if (row.size() != want.size()) return false;
  std::size_t i = 0;
  for (long w : want)
    if (row[i++] != w) return false;
  return true;
}

// --- criteria ----------------------------------------------------------------

bool c1_known_rows(std::string&) {
  return rows_equal(expand_coeffs(2, 1).row, {1, 1}) &&
         rows_equal(expand_coeffs(2, 2).row, {1, 2, 2, 2, 1}) &&
         rows_equal(expand_coeffs(2, 3).row, {1, 3, 5, 7, 8, 8, 8, 8, 7, 5, 3, 1});
}

bool c2_normalization_symmetry(std::string&) {
  for (unsigned a : {2u, 3u, 5u}) {
    for (unsigned N = 1; N <= 8; ++N) {
      const CoeffTable t = expand_coeffs(a, N);
      Integer sum(0);
      for (const Integer& v : t.row) sum += v;
      if (sum != ui_pow(a, static_cast<unsigned long>(N) * (N + 1) / 2)) return false;
      for (std::size_t k = 0; k < t.row.size(); ++k)
        if (t.row[k] != t.row[t.row.size() - 1 - k]) return false;
    }
  }
  return true;
}

bool c3_oracle_equivalence(std::string&) {
  for (unsigned N = 1; N <= 6; ++N)
    if (expand_coeffs(2, N).row != brute_force_coeffs(2, N).row) return false;
  for (unsigned N = 1; N <= 4; ++N)
    if (expand_coeffs(3, N).row != brute_force_coeffs(3, N).row) return false;
  return true;
}

bool c4_appendix_suite(std::string&) {
  for (unsigned N = 1; N <= 6; ++N) {
    const CoeffTable t = expand_coeffs(2, N);
    for (std::size_t j = 0; j < t.row.size(); ++j)
      if (coeff_via_s2(Integer(static_cast<unsigned long>(j)), N) != t.row[j])
        return false;
    for (unsigned long n = 0; n < (1ul << N); ++n) {
      const Integer want = s2(Integer(n)) % 2 == 0 ? 1 : -1;
      if (invert_s2_check(Integer(n), N) != want) return false;
    }
  }
  for (unsigned N = 1; N <= 5; ++N) {
    ValueTable squares, pow2;
    squares.lo = pow2.lo = -1;
    Integer p(1);
    for (long y = -1; y <= (1l << (N + 1)) + 1; ++y) {
      squares.values.emplace_back(Integer(y * y));
      pow2.values.push_back(y < 0 ? make_rational(1, 2) : Rational(p));
      if (y >= 0) p *= 2;
    }
    if (!appendix_tn_check(N, squares, 0)) return false;
    if (!appendix_tn_check(N, pow2, 0)) return false;
    if (!finite_difference_check(N, squares, 0)) return false;
    if (!finite_difference_check(N, pow2, 0)) return false;
  }
  return true;
}

bool c5_cumulant_exactness(std::string&) {
  for (unsigned N = 1; N <= 20; ++N) {
    const CumulantSeq seq = standardized_cumulants(2, N, 10);
    if (seq.kappa2n(1) != 1) return false;
    for (unsigned n = 1; n <= 10; ++n)
      if (seq.kappa2n(n) != standardized_cumulant_closed_form(N, n)) return false;
  }
  for (unsigned N = 1; N <= 5; ++N) {
    const auto kappa = cumulants_from_moments(raw_moments(expand_coeffs(2, N), 12));
    const auto [mean, var] = mean_variance(2, N);
    (void)mean;
    for (unsigned n = 1; n <= 6; ++n)
      if (kappa[2 * n] / rpow(var, n) != standardized_cumulant_closed_form(N, n))
        return false;
  }
  return true;
}

bool c6_decomposition(std::string&) {
  for (unsigned N = 1; N <= 15; ++N)
    for (unsigned n = 1; n <= 8; ++n)
      if (!cumulant_decomposition_check(N, n)) return false;
  return true;
}

bool c7_limit_moments(std::string& detail) {
  const auto m1 = moments_rec1(50);
  const auto m2 = moments_rec2(50);
  const auto m3 = moments_rec3(50);
  if (m1 != m2 || m2 != m3) {
    detail = "recurrences disagree";
    return false;
  }
  if (m1[2] != make_rational(57, 25) || m1[3] != make_rational(1749, 245)) {
    detail = "m4/m6 exact values";
    return false;
  }
  // published decimals, half a unit in the last printed place
  const struct {
    unsigned n;
    double printed, tol;
  } table[] = {{4, 26.785, 5e-4},
               {5, 113.33214, 5e-6},
               {6, 523.1019, 5e-5},
               {7, 2580.48, 5e-3},
               {8, 13420.0, 5.0}};  // 4 significant digits
  for (const auto& row : table) {
    const double got = to_double(m1[row.n]);
    if (std::abs(got - row.printed) > row.tol) {
      std::ostringstream os;
      os << "m_" << 2 * row.n << " = " << got << " vs " << row.printed;
      detail = os.str();
      return false;
    }
  }
  return true;
}

bool c8_moment_bound(std::string& detail) {
  const auto m = moments_rec1(50);
  for (unsigned n = 1; n <= 50; ++n)
    if (m[n] > Rational(ui_pow(9, n))) {
      detail = "9^n bound violated";
      return false;
    }
  const double root = lyapunov_profile(50)[50];
  std::ostringstream os;
  os << "(m_100)^(1/100) = " << root;
  detail = os.str();
  return root > 2.5 && root <= 3.0;
}

bool c9_truncated_oracle(std::string&) {
  const auto m = moments_from_truncated_sum(30, 2);
  return std::abs(to_double(m[2]) - 57.0 / 25.0) < 1e-12;
}

bool c10_density_grid(std::string& detail) {
  const DensityGrid g = density_grid(2, 8192, 40);
  std::ostringstream os;
  const double mass = g.trapezoid_mass();
  const double var = g.moment(2);
  const double m4 = g.moment(4);
  double sym = 0;
  for (std::size_t i = 0; i <= g.grid_m; ++i)
    sym = std::max(sym, std::abs(g.pdf[i] - g.pdf[g.grid_m - i]));
  os << "mass-1=" << mass - 1 << " var-1=" << var - 1 << " m4=" << m4
     << " sym=" << sym;
  detail = os.str();
  if (std::abs(mass - 1) > 1e-6) return false;
  if (std::abs(var - 1) > 1e-4) return false;
  if (sym >= 1e-12) return false;
  if (std::abs(m4 - 2.28) > 1e-3) return false;
  // support containment: nothing outside [-3 - h, 3 + h]
  const double b = support_halfwidth(2);
  if (g.x_at(0) < -b - g.h - 1e-12 || g.x_at(g.grid_m) > b + g.h + 1e-12) return false;
  if (g.pdf.front() != 0.0 || g.pdf.back() != 0.0) return false;
  return true;
}

bool c11_shift_scale(std::string& detail) {
  const unsigned a = 3;
  const DensityGrid direct = density_grid(a, 8192, 40);
  const DensityGrid vs = vstar_grid(a, 8192, 40);
  const double b = support_halfwidth(a);
  double sup = 0;
  for (std::size_t i = 0; i <= direct.grid_m; ++i) {
    const auto mapped = shift_scale_maps(a, direct.x_at(i), vs);
    sup = std::max(sup, std::abs(mapped.cdf - direct.cdf[i]));
  }
  // certified: both truncation bounds plus the O(h^2) interpolation slack
  const double tol = direct.truncation_bound + vs.truncation_bound +
                     direct.h * direct.h + std::pow(2 * b * vs.h, 2);
  std::ostringstream os;
  os << "sup=" << sup << " tol=" << tol;
  detail = os.str();
  return sup <= tol;
}

bool c12_convergence(std::string& detail) {
  const DensityGrid grid = density_grid(2, 8192, 40);
  const KsReport rep = ks_convergence(2, {2, 4, 6, 8, 10}, grid, 0, 0);
  std::ostringstream os;
  for (const auto& e : rep.entries) os << "N=" << e.order << ":" << e.exact_ks << " ";
  detail = os.str();
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    if (rep.entries[i].exact_ks >= rep.entries[i - 1].exact_ks) return false;
  return rep.entries.back().exact_ks < rep.entries.front().exact_ks / 3.0;
}

bool c13_clt_diagnostics(std::string& detail) {
  const auto d = clt_diagnostics(2, 20, 0.1);
  std::ostringstream os;
  os << "feller=" << d.feller_ratio << " lindeberg=" << d.lindeberg_sum;
  detail = os.str();
  return std::abs(d.feller_ratio - 0.75) < 1e-5 && d.lindeberg_sum > 0.1;
}

bool c14_monte_carlo(std::string& detail) {
  const std::size_t n = 1000000;
  for (unsigned N : {2u, 5u, 10u}) {
    const auto stats = batch_stats(sample_zn_direct(2, N, n, 20250));
    const auto [mean, var] = mean_variance(2, N);
    const double sigma = std::sqrt(to_double(var));
    const double se_mean = sigma / std::sqrt(static_cast<double>(n));
    if (std::abs(stats.mean - to_double(mean)) >= 4 * se_mean) {
      detail = "mean check failed at N=" + std::to_string(N);
      return false;
    }
    const double k4 = to_double(standardized_cumulants(2, N, 2).kappa2n(2));
    const double v = to_double(var);
    const double se_var = std::sqrt((k4 + 2.0) * v * v / static_cast<double>(n));
    if (std::abs(stats.variance - v) >= 4 * se_var) {
      detail = "variance check failed at N=" + std::to_string(N);
      return false;
    }
  }
  for (unsigned N = 1; N <= 4; ++N) {
    const auto x = sample_zn_direct(2, N, n, 1234);
    const auto y = sample_zn_bernoulli(N, n, 4321);
    const auto two = chi_square_two_sample(x, y);
    if (two.p_value <= 0.001) {
      detail = "two-sample chi-square rejected at N=" + std::to_string(N) +
               " p=" + std::to_string(two.p_value);
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  run_criterion({1, "known coefficient rows (a=2, N<=3)", 1}, c1_known_rows);
  run_criterion({2, "normalization and symmetry (a in {2,3,5}, N<=8)", 30},
                c2_normalization_symmetry);
  run_criterion({3, "expansion equals brute-force enumeration", 60}, c3_oracle_equivalence);
  run_criterion({4, "appendix identity suite", 60}, c4_appendix_suite);
  run_criterion({5, "standardized cumulant exactness", 30}, c5_cumulant_exactness);
  run_criterion({6, "three-series cumulant decomposition", 10}, c6_decomposition);
  run_criterion({7, "limit moments: recurrences and published decimals", 10},
                c7_limit_moments);
  run_criterion({8, "moment bound and Lyapunov root in (2.5, 3]", 0}, c8_moment_bound);
  run_criterion({9, "truncated-sum oracle at K=30", 0}, c9_truncated_oracle);
  run_criterion({10, "density grid quality (a=2, M=8192, iters=40)", 0}, c10_density_grid);
  run_criterion({11, "shift-scale consistency (a=3)", 0}, c11_shift_scale);
  run_criterion({12, "exact-KS convergence along N=2..10", 0}, c12_convergence);
  run_criterion({13, "CLT diagnostics at (a=2, N=20)", 0}, c13_clt_diagnostics);
  run_criterion({14, "Monte Carlo batteries (count 10^6)", 120}, c14_monte_carlo);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
