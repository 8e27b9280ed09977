#include "partlim/verify.hpp"

#include "partlim/coeffs.hpp"
#include "partlim/dist.hpp"
#include "partlim/limitlaw.hpp"
#include "partlim/montecarlo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace partlim {

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

namespace {

void add(VerifyReport& r, const std::string& name, bool pass, std::string detail = "") {
  r.checks.push_back({name, pass, std::move(detail)});
}

ValueTable polynomial_table(long long lo, long long hi, unsigned degree) {
  ValueTable t;
  t.lo = lo;
  for (long long y = lo; y <= hi; ++y)
    t.values.push_back(Rational(ipow(Integer(static_cast<long>(y)), degree)));
  return t;
}

ValueTable power2_table(long long lo, long long hi) {
  ValueTable t;
  t.lo = lo;
  for (long long y = lo; y <= hi; ++y) {
    if (y >= 0)
      t.values.push_back(Rational(ui_pow(2, static_cast<unsigned long>(y))));
    else
      t.values.push_back(make_rational(1, ui_pow(2, static_cast<unsigned long>(-y))));
  }
  return t;
}

}  // namespace

VerifyReport verify_appendix(const VerifyBudget& budget) {
  VerifyReport r;
  r.suite = "appendix";

  // digit-sum convolution vs expansion, full natural range
  {
    bool ok = true;
    for (unsigned N = 1; N <= budget.s2_order && ok; ++N) {
      const CoeffTable t = expand_coeffs(2, N);
      for (std::size_t j = 0; j < t.row.size(); ++j)
        if (coeff_via_s2(Integer(static_cast<unsigned long>(j)), N) != t.row[j]) {
          ok = false;
          break;
        }
    }
    add(r, "s2-convolution-matches-expansion", ok,
        "N <= " + std::to_string(budget.s2_order));
  }

  // inverse relation equals (-1)^(s2(n))
  {
    bool ok = true;
    for (unsigned N = 1; N <= budget.s2_order && ok; ++N) {
      const unsigned long long top = (1ull << N) - 1;
      for (unsigned long long n = 0; n <= top; ++n) {
        const Integer want = s2(Integer(static_cast<unsigned long>(n))) % 2 == 0 ? 1 : -1;
        if (invert_s2_check(Integer(static_cast<unsigned long>(n)), N) != want) {
          ok = false;
          break;
        }
      }
    }
    add(r, "s2-inverse-relation", ok, "N <= " + std::to_string(budget.s2_order));
  }

  // T_N multiple sum vs alpha-weighted sum for polynomial/exponential tables
  {
    bool ok = true;
    for (unsigned N = 1; N <= budget.appendix_order && ok; ++N) {
      const long long hi = (1ll << (N + 1));
      ok = ok && appendix_tn_check(N, polynomial_table(-2, hi, 2), 0);
      ok = ok && appendix_tn_check(N, polynomial_table(-2, hi, 1), -1);
      ok = ok && appendix_tn_check(N, power2_table(-2, hi), 0);
    }
    add(r, "tn-weighted-sum", ok, "N <= " + std::to_string(budget.appendix_order));
  }

  // finite-difference identity; degree < N must vanish on both sides
  {
    bool ok = true;
    for (unsigned N = 1; N <= budget.appendix_order && ok; ++N) {
      const long long hi = (1ll << (N + 1));
      ok = ok && finite_difference_check(N, polynomial_table(-2, hi, 2), 0);
      ok = ok && finite_difference_check(N, power2_table(-2, hi), 0);
      if (N >= 2) ok = ok && finite_difference_check(N, polynomial_table(-2, hi, N - 1), 1);
    }
    add(r, "finite-difference-identity", ok,
        "N <= " + std::to_string(budget.appendix_order));
  }

  // both product forms expand identically (base 2)
  {
    bool ok = true;
    ExpandOptions opts;
    opts.verify_alt_form = true;
    for (unsigned N = 1; N <= 10 && ok; ++N) {
      try {
        expand_coeffs(2, N, opts);
      } catch (const ValidationError&) {
        ok = false;
      }
    }
    add(r, "product-forms-agree", ok, "N <= 10");
  }
  return r;
}

VerifyReport verify_cumulants(const VerifyBudget& budget) {
  VerifyReport r;
  r.suite = "cumulants";

  {
    bool ok = true;
    for (unsigned N = 1; N <= 20 && ok; ++N) {
      const CumulantSeq seq = standardized_cumulants(2, N, 10);
      if (seq.kappa2n(1) != 1) ok = false;
      for (unsigned n = 1; n <= 10 && ok; ++n)
        if (seq.kappa2n(n) != standardized_cumulant_closed_form(N, n)) ok = false;
    }
    add(r, "closed-form-equality", ok, "a=2, N <= 20, n <= 10");
  }

  {
    bool ok = true;
    for (unsigned N = 1; N <= budget.cumulant_order && ok; ++N)
      for (unsigned n = 1; n <= budget.cumulant_half_order && ok; ++n)
        if (!cumulant_decomposition_check(N, n)) ok = false;
    add(r, "three-series-decomposition", ok,
        "N <= " + std::to_string(budget.cumulant_order) + ", n <= " +
            std::to_string(budget.cumulant_half_order));
  }

  // pmf-derived standardized cumulants at desk scale
  {
    bool ok = true;
    for (unsigned N = 1; N <= 5 && ok; ++N) {
      const CoeffTable t = expand_coeffs(2, N);
      const auto raw = raw_moments(t, 12);
      const auto kappa = cumulants_from_moments(raw);
      const auto [mean, var] = mean_variance(2, N);
      if (kappa[1] != mean || kappa[2] != var) ok = false;
      for (unsigned n = 1; n <= 6 && ok; ++n)
        if (kappa[2 * n] / rpow(var, n) != standardized_cumulant_closed_form(N, n))
          ok = false;
      for (unsigned p = 3; p <= 11 && ok; p += 2)
        if (kappa[p] != 0) ok = false;  // odd cumulants above the mean vanish
    }
    add(r, "pmf-derived-cumulants", ok, "a=2, N <= 5");
  }
  return r;
}

VerifyReport verify_recurrences(const VerifyBudget& budget) {
  VerifyReport r;
  r.suite = "recurrences";
  const unsigned n = budget.recurrence_half_order;
  const auto m1 = moments_rec1(n);
  const auto m2 = moments_rec2(n);
  const auto m3 = moments_rec3(n);
  add(r, "rec1-rec2-rec3-agree", m1 == m2 && m2 == m3, "n <= " + std::to_string(n));
  add(r, "m4-value", m1.size() > 2 && m1[2] == make_rational(57, 25), "57/25");
  add(r, "m6-value", m1.size() > 3 && m1[3] == make_rational(1749, 245), "1749/245");

  {
    const auto from_kappa = moments_from_cumulants([&] {
      const CumulantSeq ks = limit_cumulants(2, n);
      std::vector<Rational> kap(2 * n + 1, Rational(0));
      for (unsigned i = 1; i <= n; ++i) kap[2 * i] = ks.kappa2n(i);
      return kap;
    }());
    bool ok = true;
    for (unsigned i = 0; i <= n && ok; ++i)
      if (from_kappa[2 * i] != m1[i]) ok = false;
    add(r, "cumulant-conversion-agrees", ok, "Bell-type conversion");
  }

  {
    bool ok = true;
    for (unsigned i = 1; i <= n && ok; ++i)
      if (m1[i] > Rational(ui_pow(9, i))) ok = false;
    add(r, "moment-bound-9n", ok, "m_2n <= 9^n");
  }

  {
    const auto trunc = moments_from_truncated_sum(30, 2);
    const double gap = std::abs(to_double(trunc[2]) - 57.0 / 25.0);
    add(r, "truncated-sum-oracle", gap < 1e-12,
        "|m4(K=30) - 57/25| = " + std::to_string(gap));
  }
  return r;
}

VerifyReport verify_convergence(const VerifyBudget& budget) {
  VerifyReport r;
  r.suite = "convergence";
  const DensityGrid grid = density_grid(2, budget.grid_m, budget.grid_iters);
  const KsReport ks = ks_convergence(2, {2, 4, 6, 8, 10}, grid, 0, 0);
  bool decreasing = true;
  for (std::size_t i = 1; i < ks.entries.size(); ++i)
    if (ks.entries[i].exact_ks >= ks.entries[i - 1].exact_ks) decreasing = false;
  std::ostringstream detail;
  for (const auto& e : ks.entries) detail << "N=" << e.order << ":" << e.exact_ks << " ";
  add(r, "exact-ks-decreasing", decreasing, detail.str());
  add(r, "final-below-a-third-of-initial",
      ks.entries.back().exact_ks < ks.entries.front().exact_ks / 3.0, "");
  return r;
}

std::vector<VerifyReport> run_verify(const std::string& suite, const VerifyBudget& budget) {
  std::vector<VerifyReport> reports;
  const bool all = suite == "all";
  if (all || suite == "appendix") reports.push_back(verify_appendix(budget));
  if (all || suite == "cumulants") reports.push_back(verify_cumulants(budget));
  if (all || suite == "recurrences") reports.push_back(verify_recurrences(budget));
  if (all || suite == "convergence") reports.push_back(verify_convergence(budget));
  if (reports.empty()) throw std::invalid_argument("unknown verify suite: " + suite);
  return reports;
}

}  // namespace partlim
