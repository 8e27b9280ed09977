#include "partlim/exact.hpp"

#include <stdexcept>

namespace partlim {

Rational make_rational(Integer num, Integer den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer ui_pow(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

Rational rpow(const Rational& base, unsigned long exp) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), exp);
  return r;  // canonical since base was
}

Integer binomial(const Integer& n, long k) {
  if (k < 0) throw std::invalid_argument("binomial: negative k");
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

unsigned long s2(const Integer& n) {
  if (n < 0) throw std::invalid_argument("s2: negative argument");
  return mpz_popcount(n.get_mpz_t());
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_decimal_string(const Rational& q, int sig_digits) {
  if (sig_digits < 1) sig_digits = 1;
  if (q == 0) return "0";
  mpf_class f(q, static_cast<unsigned>(sig_digits) * 4 + 64);
  mp_exp_t exp10 = 0;
  std::string digits = f.get_str(exp10, 10, static_cast<std::size_t>(sig_digits));
  std::string sign;
  if (!digits.empty() && digits[0] == '-') {
    sign = "-";
    digits.erase(digits.begin());
  }
  // get_str yields 0.digits * 10^exp10
  std::string out;
  if (exp10 >= 1 && exp10 <= sig_digits + 3) {
    if (static_cast<std::size_t>(exp10) >= digits.size()) {
      out = digits + std::string(static_cast<std::size_t>(exp10) - digits.size(), '0');
    } else {
      out = digits.substr(0, static_cast<std::size_t>(exp10)) + "." +
            digits.substr(static_cast<std::size_t>(exp10));
    }
  } else if (exp10 <= 0 && exp10 >= -4) {
    out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(exp10 - 1);
  }
  return sign + out;
}

BernoulliCache::BernoulliCache() {
  computed_.push_back(Rational(1));
  computed_.push_back(make_rational(-1, 2));
}

void BernoulliCache::grow(std::size_t n) const {
  // sum_{k=0}^{m} C(m+1,k) B_k = 0  =>  B_m from the earlier entries
  while (computed_.size() <= n) {
    const std::size_t m = computed_.size();
    Rational acc(0);
    for (std::size_t k = 0; k < m; ++k)
      acc += Rational(binomial(Integer(m + 1), static_cast<long>(k))) * computed_[k];
    acc /= Integer(m + 1);
    computed_.push_back(-acc);
  }
}

Rational BernoulliCache::number(std::size_t n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  grow(n);
  return computed_[n];
}

Rational BernoulliCache::poly_at_half(std::size_t n) const {
  // B_n(1/2) = sum_k C(n,k) B_k (1/2)^(n-k)
  Rational acc(0);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    grow(n);
    for (std::size_t k = 0; k <= n; ++k) {
      Rational term(binomial(Integer(n), static_cast<long>(k)));
      term *= computed_[k];
      term /= Rational(ui_pow(2, static_cast<unsigned long>(n - k)));
      acc += term;
    }
  }
  return acc;
}

namespace {
BernoulliCache& global_bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}
}  // namespace

Rational bernoulli_number(std::size_t n) { return global_bernoulli_cache().number(n); }
Rational bernoulli_poly_at_half(std::size_t n) { return global_bernoulli_cache().poly_at_half(n); }

}  // namespace partlim
