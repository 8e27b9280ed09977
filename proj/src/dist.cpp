#include "partlim/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace partlim {

std::vector<Rational> pmf(const CoeffTable& table) {
  std::vector<Rational> p;
  p.reserve(table.row.size());
  for (const Integer& c : table.row) p.push_back(make_rational(c, table.total));
  return p;
}

std::pair<Rational, Rational> mean_variance(unsigned a, unsigned N) {
  if (a < 2 || N < 1) throw std::invalid_argument("mean_variance: need a >= 2, N >= 1");
  const Integer aN = ui_pow(a, N);
  Rational mean = make_rational(Integer(a) * (aN - 1), Integer(a - 1)) - N;
  mean /= 2;
  const Integer a2N = ui_pow(a, 2 * static_cast<unsigned long>(N));
  Rational var = make_rational(Integer(a) * a * (1 - a2N), Integer(1) - Integer(a) * a) - N;
  var /= 12;
  return {mean, var};
}

DistSummary summarize(unsigned a, unsigned N) {
  DistSummary s;
  s.base = a;
  s.order = N;
  std::tie(s.mean, s.variance) = mean_variance(a, N);
  s.c_squared = s.variance * 9;
  return s;
}

Rational summand_variance(unsigned a, unsigned j) {
  return make_rational(ui_pow(a, 2 * static_cast<unsigned long>(j)) - 1, Integer(12));
}

namespace {

// One discrete-uniform MGF factor (e^(tm) - 1)/(m (e^t - 1)). expm1 keeps the
// ratio accurate down to tiny t; the polynomial branch handles the removable
// singularity and is valid only while t*m is small as well.
double mgf_factor(double t, double m) {
  if (t == 0.0) return 1.0;
  if (std::abs(t) < 1e-8 && std::abs(t) * m < 1e-3) {
    // (1/m) sum_j e^(tj) expanded to four terms via power sums of 0..m-1
    const double s1 = (m - 1) / 2.0;
    const double s2 = (m - 1) * (2 * m - 1) / 6.0;
    const double s3 = m * (m - 1) * (m - 1) / 4.0;
    return 1.0 + t * s1 + t * t * s2 / 2.0 + t * t * t * s3 / 6.0;
  }
  if (t * m > 700.0) throw std::overflow_error("mgf_eval: e^(t a^k) overflows");
  return std::expm1(t * m) / (m * std::expm1(t));
}

}  // namespace

double mgf_eval(unsigned a, unsigned N, double t) {
  if (a < 2 || N < 1) throw std::invalid_argument("mgf_eval: need a >= 2, N >= 1");
  if (!std::isfinite(t)) throw std::invalid_argument("mgf_eval: t must be finite");
  double prod = 1.0;
  double m = 1.0;
  for (unsigned k = 1; k <= N; ++k) {
    m *= a;
    prod *= mgf_factor(t, m);
  }
  if (!std::isfinite(prod)) throw std::overflow_error("mgf_eval: product overflows");
  return prod;
}

double mgf_standardized(unsigned a, unsigned N, double t) {
  const auto [mean, var] = mean_variance(a, N);
  const double sigma = std::sqrt(to_double(var));
  return std::exp(-t * to_double(mean) / sigma) * mgf_eval(a, N, t / sigma);
}

CumulantSeq standardized_cumulants(unsigned a, unsigned N, unsigned n_max) {
  if (a < 2 || N < 1 || n_max < 1)
    throw std::invalid_argument("standardized_cumulants: bad parameters");
  const auto [mean, var] = mean_variance(a, N);
  (void)mean;
  CumulantSeq seq;
  seq.base = a;
  seq.order = N;
  seq.even.resize(n_max + 1);
  for (unsigned n = 1; n <= n_max; ++n) {
    Integer s(0);
    for (unsigned j = 1; j <= N; ++j)
      s += ui_pow(a, 2ul * n * j) - 1;
    Rational k = bernoulli_number(2 * n) / Integer(2 * n);
    k *= s;
    k /= rpow(var, n);
    seq.even[n] = k;
  }
  return seq;
}

Rational standardized_cumulant_closed_form(unsigned N, unsigned n) {
  // 9^n/(4^n - 1) * (4^n (4^(nN) - N - 1) + N)/(4^N - 3N/4 - 1)^n * B_2n/2n
  const Integer four_n = ui_pow(4, n);
  const Integer numer = four_n * (ui_pow(4, static_cast<unsigned long>(n) * N) - N - 1) + N;
  Rational c2 = Rational(ui_pow(4, N)) - make_rational(Integer(3) * N, Integer(4)) - 1;
  Rational k = make_rational(ui_pow(9, n), four_n - 1);
  k *= numer;
  k /= rpow(c2, n);
  k *= bernoulli_number(2 * n) / Integer(2 * n);
  return k;
}

bool cumulant_decomposition_check(unsigned N, unsigned n) {
  if (N < 1 || n < 1)
    throw std::invalid_argument("cumulant_decomposition_check: bad parameters");
  Rational c2 = Rational(ui_pow(4, N)) - make_rational(Integer(3) * N, Integer(4)) - 1;
  const Rational c2n = rpow(c2, n);
  const Integer four_n = ui_pow(4, n);  // 2^(2n)
  Rational pref = Rational(ui_pow(36, n)) / c2n;             // 6^(2n)/c_N^(2n)
  pref *= bernoulli_number(2 * n) / Integer(2 * n);
  pref /= four_n - 1;

  const Rational term1 = pref * ui_pow(4, static_cast<unsigned long>(N) * n);
  const Rational term2 = -pref * Integer(N + 1);
  const Rational term3 = pref * Integer(N) / four_n;

  return term1 + term2 + term3 == standardized_cumulant_closed_form(N, n);
}

namespace {

// floor(sqrt(p/q)) for p/q >= 0.
Integer floor_sqrt(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  Integer v;
  mpz_sqrt(v.get_mpz_t(), r.get_mpz_t());
  return v;
}

// sum of k^2 and k over an integer range [k1, k2].
Integer range_sum(const Integer& k1, const Integer& k2) {
  return (k2 * (k2 + 1) - k1 * (k1 - 1)) / 2;
}
Integer range_sum_sq(const Integer& k1, const Integer& k2) {
  // gmpxx lambdas need the explicit Integer return: a deduced type would be
  // an expression template referencing dead temporaries
  auto faulhaber2 = [](const Integer& m) -> Integer {  // sum_{i=0}^{m} i^2
    return m * (m + 1) * (2 * m + 1) / 6;
  };
  return faulhaber2(k2) - faulhaber2(Integer(k1 - 1));
}

}  // namespace

CltDiagnostics clt_diagnostics(unsigned a, unsigned N, double eps) {
  if (eps <= 0 || !std::isfinite(eps))
    throw std::invalid_argument("clt_diagnostics: eps must be positive");
  const auto [mean, var] = mean_variance(a, N);
  (void)mean;

  CltDiagnostics d;
  d.feller_exact = summand_variance(a, N) / var;  // variances increase with j
  d.uan_exact = make_rational(Integer(1), Integer(a));

  // Lindeberg sum: for X_j uniform on 0..m-1 with center c = (m-1)/2, the
  // indicator |X_j - c| > eps sigma becomes (2k - (m-1))^2 > 4 eps^2 sigma^2,
  // an exact rational comparison (doubles are dyadic rationals).
  const Rational eps_q(eps);
  const Rational big_q = eps_q * eps_q * var * 4;
  Rational linde(0);
  for (unsigned j = 1; j <= N; ++j) {
    const Integer m = ui_pow(a, j);
    // smallest v >= 0 with v^2 > 4 eps^2 sigma^2
    Integer v = floor_sqrt(big_q);
    if (Rational(v) * v <= big_q) v += 1;
    // upper-tail deviations u = 2k - (m-1) >= v with u's parity (m-1 mod 2)
    Integer u0 = v;
    if ((u0 % 2) != ((m - 1) % 2)) u0 += 1;
    if (u0 > m - 1) continue;
    // u = u0, u0+2, ..., m-1; sum u^2 = 4 sum t^2 + 4 u0 sum t + cnt u0^2
    const Integer cnt = (m - 1 - u0) / 2 + 1;
    const Integer tsum = range_sum(0, cnt - 1);
    const Integer t2sum = range_sum_sq(0, cnt - 1);
    const Integer usq = cnt * u0 * u0 + 4 * u0 * tsum + 4 * t2sum;
    // both tails, (u/2)^2 weight, 1/m probability each
    linde += make_rational(usq, Integer(2) * m);
  }
  d.lindeberg_exact = linde / var;

  d.feller_ratio = to_double(d.feller_exact);
  d.lindeberg_sum = to_double(d.lindeberg_exact);
  d.uan_max_atom = to_double(d.uan_exact);
  return d;
}

std::vector<Rational> raw_moments(const CoeffTable& table, unsigned p_max) {
  std::vector<Rational> raw(p_max + 1, Rational(0));
  raw[0] = 1;
  // E Z^p = sum_k alpha_k k^p / total
  for (unsigned p = 1; p <= p_max; ++p) {
    Integer s(0);
    for (std::size_t k = 0; k < table.row.size(); ++k)
      s += table.row[k] * ipow(Integer(static_cast<unsigned long>(k)), p);
    raw[p] = make_rational(s, table.total);
  }
  return raw;
}

std::vector<Rational> cumulants_from_moments(const std::vector<Rational>& raw) {
  if (raw.empty() || raw[0] != 1)
    throw std::invalid_argument("cumulants_from_moments: raw[0] must be 1");
  std::vector<Rational> kappa(raw.size(), Rational(0));
  for (std::size_t n = 1; n < raw.size(); ++n) {
    Rational acc = raw[n];
    for (std::size_t j = 1; j < n; ++j)
      acc -= Rational(binomial(Integer(n - 1), static_cast<long>(j - 1))) * kappa[j] *
             raw[n - j];
    kappa[n] = acc;
  }
  return kappa;
}

std::vector<Rational> moments_from_cumulants(const std::vector<Rational>& kappa) {
  std::vector<Rational> raw(kappa.size(), Rational(0));
  if (raw.empty()) return raw;
  raw[0] = 1;
  for (std::size_t n = 1; n < kappa.size(); ++n) {
    Rational acc(0);
    for (std::size_t j = 1; j <= n; ++j)
      acc += Rational(binomial(Integer(n - 1), static_cast<long>(j - 1))) * kappa[j] *
             raw[n - j];
    raw[n] = acc;
  }
  return raw;
}

}  // namespace partlim
