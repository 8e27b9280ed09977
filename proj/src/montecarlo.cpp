#include "partlim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace partlim {

namespace rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (stream + 1));
  return std::mt19937_64(splitmix64(state));
}

std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  if (bound < 2) return 0;
  std::uint64_t mask = ~0ull;
  const int bits = 64 - __builtin_clzll(bound - 1);
  mask >>= 64 - bits;
  for (;;) {
    const std::uint64_t v = eng() & mask;
    if (v < bound) return v;
  }
}

double uniform_01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace rng

namespace {

// Largest exactly-representable batch values: keep a^N below 2^53.
void check_zn_range(unsigned a, unsigned N) {
  if (a < 2 || N < 1) throw std::invalid_argument("sampler: need a >= 2, N >= 1");
  if (static_cast<double>(N) * std::log2(static_cast<double>(a)) > 53)
    throw BudgetError("sampler: a^N exceeds the exact integer range of double");
}

}  // namespace

SampleBatch sample_zn_direct(unsigned a, unsigned N, std::size_t count,
                             std::uint64_t seed) {
  check_zn_range(a, N);
  if (count < 1) throw std::invalid_argument("sampler: count must be >= 1");
  std::vector<std::mt19937_64> streams;
  std::vector<std::uint64_t> bound(N + 1);
  streams.reserve(N + 1);
  std::uint64_t m = 1;
  for (unsigned j = 0; j <= N; ++j) {
    streams.push_back(rng::stream_engine(seed, j));
    bound[j] = m;
    if (j < N) m *= a;
  }
  SampleBatch batch{"zn", a, N, seed, {}};
  batch.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t sum = 0;
    for (unsigned j = 1; j <= N; ++j) sum += rng::uniform_below(streams[j], bound[j]);
    batch.values.push_back(static_cast<double>(sum));
  }
  return batch;
}

SampleBatch sample_zn_bernoulli(unsigned N, std::size_t count, std::uint64_t seed) {
  check_zn_range(2, N);
  if (count < 1) throw std::invalid_argument("sampler: count must be >= 1");
  // Stream j carries the bit group (V_0^(j), ..., V_j^(j)); one 64-bit word
  // per draw supplies all j+1 bits.
  std::vector<std::mt19937_64> streams;
  streams.reserve(N);
  for (unsigned j = 0; j < N; ++j) streams.push_back(rng::stream_engine(seed, j));
  SampleBatch batch{"zn-bernoulli", 2, N, seed, {}};
  batch.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t sum = 0;
    for (unsigned j = 0; j < N; ++j) {
      const std::uint64_t word = streams[j]();
      sum += word & ((1ull << (j + 1)) - 1);  // sum_i 2^i V_i^(j)
    }
    batch.values.push_back(static_cast<double>(sum));
  }
  return batch;
}

SampleBatch sample_zstar(unsigned a, unsigned K, std::size_t count, std::uint64_t seed) {
  if (a < 2 || K < 1) throw std::invalid_argument("sampler: need a >= 2, K >= 1");
  if (count < 1) throw std::invalid_argument("sampler: count must be >= 1");
  const double b = support_halfwidth(a);
  std::vector<std::mt19937_64> streams;
  std::vector<double> scale(K + 1);
  streams.reserve(K + 1);
  for (unsigned k = 0; k <= K; ++k) {
    streams.push_back(rng::stream_engine(seed, k));
    scale[k] = std::pow(static_cast<double>(a), -static_cast<double>(k));
  }
  SampleBatch batch{"zstar", a, K, seed, {}};
  batch.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double sum = 0;
    for (unsigned k = 1; k <= K; ++k)
      sum += scale[k] * (-b + 2.0 * b * rng::uniform_01(streams[k]));
    batch.values.push_back(sum);
  }
  return batch;
}

MomentStats batch_stats(const SampleBatch& batch) {
  MomentStats s;
  s.count = batch.values.size();
  if (s.count == 0) return s;
  double sum = 0;
  for (double v : batch.values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double ss = 0, q4 = 0;
  for (double v : batch.values) {
    const double d = v - s.mean;
    ss += d * d;
    q4 += v * v * v * v;
  }
  s.variance = s.count > 1 ? ss / static_cast<double>(s.count - 1) : 0.0;
  s.m4 = q4 / static_cast<double>(s.count);
  return s;
}

// --- regularized incomplete gamma -------------------------------------------

namespace {

double gamma_p_series(double s, double x) {
  double term = 1.0 / s, sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cf(double s, double x) {
  // Lentz continued fraction for Q(s, x), x > s + 1
  const double tiny = 1e-300;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, f = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -k * (k - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double gamma_q(double s, double x) {
  if (s <= 0 || x < 0) throw std::invalid_argument("gamma_q: domain error");
  if (x == 0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_square_pvalue(double statistic, unsigned df) {
  if (df == 0) return 1.0;
  return gamma_q(df / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_vs_pmf(const SampleBatch& batch,
                                  const std::vector<Rational>& probabilities,
                                  double min_expected) {
  const std::size_t n = batch.values.size();
  std::vector<std::size_t> counts(probabilities.size(), 0);
  for (double v : batch.values) {
    const long long k = static_cast<long long>(v);
    if (k < 0 || static_cast<std::size_t>(k) >= counts.size())
      throw std::invalid_argument("chi_square_vs_pmf: value outside pmf support");
    ++counts[static_cast<std::size_t>(k)];
  }
  // merge sparse bins left to right until each expects min_expected
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double obs = 0, expd = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    obs += static_cast<double>(counts[k]);
    expd += to_double(probabilities[k]) * static_cast<double>(n);
    if (expd >= min_expected) {
      bins.emplace_back(obs, expd);
      obs = expd = 0;
    }
  }
  if (expd > 0 || obs > 0) {
    if (bins.empty())
      bins.emplace_back(obs, expd);
    else {
      bins.back().first += obs;
      bins.back().second += expd;
    }
  }
  ChiSquareResult r;
  for (const auto& [o, e] : bins) r.statistic += (o - e) * (o - e) / e;
  r.df = static_cast<unsigned>(bins.size()) - 1;
  r.p_value = chi_square_pvalue(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square_two_sample(const SampleBatch& x, const SampleBatch& y,
                                      double min_expected) {
  long long kmin = 0, kmax = 0;
  auto scan = [&](const SampleBatch& b, bool first) {
    for (double v : b.values) {
      const long long k = static_cast<long long>(v);
      if (first || k < kmin) kmin = k;
      if (first || k > kmax) kmax = k;
      first = false;
    }
  };
  scan(x, true);
  scan(y, false);
  const std::size_t width = static_cast<std::size_t>(kmax - kmin + 1);
  std::vector<double> cx(width, 0), cy(width, 0);
  for (double v : x.values) ++cx[static_cast<std::size_t>(static_cast<long long>(v) - kmin)];
  for (double v : y.values) ++cy[static_cast<std::size_t>(static_cast<long long>(v) - kmin)];

  const double nx = static_cast<double>(x.values.size());
  const double ny = static_cast<double>(y.values.size());
  const double rx = std::sqrt(ny / nx), ry = std::sqrt(nx / ny);

  std::vector<std::pair<double, double>> bins;
  double ax = 0, ay = 0;
  for (std::size_t k = 0; k < width; ++k) {
    ax += cx[k];
    ay += cy[k];
    if (ax + ay >= 2 * min_expected) {
      bins.emplace_back(ax, ay);
      ax = ay = 0;
    }
  }
  if (ax + ay > 0) {
    if (bins.empty())
      bins.emplace_back(ax, ay);
    else {
      bins.back().first += ax;
      bins.back().second += ay;
    }
  }
  ChiSquareResult r;
  for (const auto& [bx, by] : bins) {
    const double d = rx * bx - ry * by;
    r.statistic += d * d / (bx + by);
  }
  r.df = bins.size() > 1 ? static_cast<unsigned>(bins.size()) - 1 : 1;
  r.p_value = chi_square_pvalue(r.statistic, r.df);
  return r;
}

KsReport ks_convergence(unsigned a, const std::vector<unsigned>& orders,
                        const DensityGrid& grid, std::size_t count,
                        std::uint64_t seed) {
  KsReport report;
  report.base = a;
  for (unsigned N : orders) {
    const CoeffTable table = expand_coeffs(a, N);
    const auto [mean, var] = mean_variance(a, N);
    const double mu = to_double(mean);
    const double sigma = std::sqrt(to_double(var));

    KsEntry entry;
    entry.order = N;

    Rational cum(0);
    double ks = 0;
    for (std::size_t k = 0; k < table.row.size(); ++k) {
      const double xk = (static_cast<double>(k) - mu) / sigma;
      const double fg = grid.cdf_at(xk);
      ks = std::max(ks, std::abs(fg - to_double(cum)));  // just below the atom
      cum += make_rational(table.row[k], table.total);
      ks = std::max(ks, std::abs(fg - to_double(cum)));  // at the atom
    }
    entry.exact_ks = ks;

    if (count > 0) {
      SampleBatch batch = sample_zn_direct(a, N, count, seed);
      std::vector<double>& v = batch.values;
      std::sort(v.begin(), v.end());
      double eks = 0;
      for (std::size_t k = 0; k < table.row.size(); ++k) {
        const double xk = (static_cast<double>(k) - mu) / sigma;
        const double fg = grid.cdf_at(xk);
        const auto up = std::upper_bound(v.begin(), v.end(), static_cast<double>(k));
        const double femp =
            static_cast<double>(up - v.begin()) / static_cast<double>(v.size());
        eks = std::max(eks, std::abs(fg - femp));
      }
      entry.empirical_ks = eks;
    }
    report.entries.push_back(entry);
  }
  return report;
}

void write_batch_csv(const SampleBatch& batch, const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "value\n";
    char buf[64];
    for (double v : batch.values) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      out << buf;
    }
  }
  std::filesystem::path side = csv_path;
  side.replace_extension(".json");
  std::ofstream out(side, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + side.string());
  const char* param_name = batch.model == "zstar" ? "K" : "N";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"model\": \"%s\", \"a\": %u, \"%s\": %u, \"seed\": %llu, "
                "\"count\": %zu}\n",
                batch.model.c_str(), batch.base, param_name, batch.param,
                static_cast<unsigned long long>(batch.seed), batch.values.size());
  out << buf;
}

}  // namespace partlim
