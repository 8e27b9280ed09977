#include "partlim/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace partlim {

Rational b_squared(unsigned a) {
  if (a < 2) throw std::invalid_argument("b_squared: base must be >= 2");
  return Rational(3) * (Integer(a) * a - 1);
}

double support_halfwidth(unsigned a) { return std::sqrt(to_double(b_squared(a))); }

CumulantSeq limit_cumulants(unsigned a, unsigned n_max) {
  if (a < 2 || n_max < 1) throw std::invalid_argument("limit_cumulants: bad parameters");
  CumulantSeq seq;
  seq.base = a;
  seq.order = std::nullopt;
  seq.even.resize(n_max + 1);
  const Rational four_bsq = b_squared(a) * 4;  // (2 b_a)^2, exact
  for (unsigned n = 1; n <= n_max; ++n) {
    Rational k = bernoulli_number(2 * n) / Integer(2 * n);
    k *= rpow(four_bsq, n);
    k /= ui_pow(a, 2ul * n) - 1;
    seq.even[n] = k;
  }
  return seq;
}

std::vector<Rational> moments_rec1(unsigned n_max, unsigned a) {
  if (a < 2 || n_max < 1) throw std::invalid_argument("moments_rec1: bad parameters");
  const Rational bsq = b_squared(a);
  std::vector<Rational> m(n_max + 1);
  m[0] = 1;
  for (unsigned n = 1; n <= n_max; ++n) {
    Rational acc(0);
    for (unsigned j = 1; j <= n; ++j)
      acc += Rational(binomial(Integer(2 * n + 1), 2l * j + 1)) * rpow(bsq, j) * m[n - j];
    acc /= Integer(2 * n + 1) * (ui_pow(a, 2ul * n) - 1);
    m[n] = acc;
  }
  return m;
}

std::vector<Rational> moments_rec2(unsigned n_max, unsigned a) {
  if (a < 2 || n_max < 1) throw std::invalid_argument("moments_rec2: bad parameters");
  const CumulantSeq ks = limit_cumulants(a, n_max);
  std::vector<Rational> m(n_max + 1);
  m[0] = 1;
  for (unsigned n = 1; n <= n_max; ++n) {
    Rational acc(0);
    for (unsigned j = 1; j <= n; ++j)
      acc += Rational(binomial(Integer(2 * n - 1), 2l * j - 1)) * ks.kappa2n(j) * m[n - j];
    m[n] = acc;
  }
  return m;
}

std::vector<Rational> moments_rec3(unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("moments_rec3: bad parameters");
  std::vector<Rational> m(n_max + 1);
  m[0] = 1;
  for (unsigned n = 1; n <= n_max; ++n) {
    Rational acc(0);
    for (unsigned j = 1; j <= n; ++j)
      acc += Rational(binomial(Integer(2 * n), 2l * j)) * Rational(ui_pow(9, j)) *
             bernoulli_poly_at_half(2 * j) * m[n - j];
    const Integer four_n = ui_pow(4, n);
    m[n] = acc * four_n / (Integer(1) - four_n);
  }
  return m;
}

std::vector<Rational> moments_from_truncated_sum(unsigned K, unsigned n_max, unsigned a) {
  if (a < 2 || K < 1 || n_max < 1)
    throw std::invalid_argument("moments_from_truncated_sum: bad parameters");
  const Rational bsq = b_squared(a);
  const unsigned pmax = 2 * n_max;
  // running raw moments of the partial sum; odd orders stay zero
  std::vector<Rational> total(pmax + 1, Rational(0));
  total[0] = 1;
  for (unsigned i = 1; i <= K; ++i) {
    // E (U/a^i)^(2j) = (b^2)^j / (2j+1) / a^(2ij)
    std::vector<Rational> u(pmax + 1, Rational(0));
    u[0] = 1;
    for (unsigned j = 1; 2 * j <= pmax; ++j)
      u[2 * j] = rpow(bsq, j) / Integer(2 * j + 1) /
                 ui_pow(a, 2ul * i * j);
    std::vector<Rational> next(pmax + 1, Rational(0));
    for (unsigned p = 0; p <= pmax; p += 2) {
      Rational acc(0);
      for (unsigned q = 0; q <= p; q += 2)
        acc += Rational(binomial(Integer(p), static_cast<long>(q))) * total[q] * u[p - q];
      next[p] = acc;
    }
    next[0] = 1;
    total = std::move(next);
  }
  std::vector<Rational> m(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) m[n] = total[2 * n];
  return m;
}

namespace {

// (num/den)^(1/(2n)) through base-2 logarithms; safe for rationals far
// outside double range.
double root_2n(const Rational& q, unsigned n) {
  long ne = 0, de = 0;
  const double nd = mpz_get_d_2exp(&ne, q.get_num().get_mpz_t());
  const double dd = mpz_get_d_2exp(&de, q.get_den().get_mpz_t());
  const double log2q = std::log2(nd) + static_cast<double>(ne) - std::log2(dd) -
                       static_cast<double>(de);
  return std::exp2(log2q / (2.0 * n));
}

}  // namespace

std::vector<double> lyapunov_profile(unsigned n_max, unsigned a) {
  const std::vector<Rational> m = moments_rec1(n_max, a);
  std::vector<double> prof(n_max + 1, 0.0);
  for (unsigned n = 1; n <= n_max; ++n) prof[n] = root_2n(m[n], n);
  return prof;
}

std::vector<UniformComparisonRow> uniform_cumulant_comparison(unsigned a,
                                                              unsigned n_max) {
  const CumulantSeq ks = limit_cumulants(a, n_max);
  // (2 b_a / a)^2 = 12(a^2 - 1)/a^2, exact
  const Rational scale_sq = b_squared(a) * 4 / (Integer(a) * a);
  std::vector<UniformComparisonRow> rows;
  rows.reserve(n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    UniformComparisonRow row;
    row.n = n;
    row.kappa_limit = ks.kappa2n(n);
    row.kappa_uniform = bernoulli_number(2 * n) / Integer(2 * n) * rpow(scale_sq, n);
    row.ratio = row.kappa_limit / row.kappa_uniform;
    rows.push_back(std::move(row));
  }
  return rows;
}

LimitLaw make_limit_law(unsigned a, unsigned n_max) {
  LimitLaw law;
  law.base = a;
  law.b_sq = b_squared(a);
  law.b = support_halfwidth(a);
  law.cumulants = limit_cumulants(a, n_max);
  law.moments = moments_rec1(n_max, a);
  return law;
}

// --- density grid ------------------------------------------------------------

double DensityGrid::pdf_at(double x) const {
  const double pos = (x - x0) / h;
  if (pos < 0 || pos > static_cast<double>(grid_m)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), grid_m - 1);
  const double frac = pos - static_cast<double>(i);
  return pdf[i] * (1.0 - frac) + pdf[i + 1] * frac;
}

double DensityGrid::cdf_at(double x) const {
  const double pos = (x - x0) / h;
  if (pos <= 0) return 0.0;
  if (pos >= static_cast<double>(grid_m)) return cdf.back();
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return cdf[i] * (1.0 - frac) + cdf[i + 1] * frac;
}

double DensityGrid::trapezoid_mass() const {
  double s = 0;
  for (double v : pdf) s += v;
  s -= 0.5 * (pdf.front() + pdf.back());
  return s * h;
}

double DensityGrid::moment(unsigned p) const {
  double s = 0;
  for (std::size_t i = 0; i <= grid_m; ++i) {
    const double w = (i == 0 || i == grid_m) ? 0.5 : 1.0;
    s += w * std::pow(x_at(i), static_cast<int>(p)) * pdf[i];
  }
  return s * h;
}

double DensityGrid::max_pdf() const { return *std::max_element(pdf.begin(), pdf.end()); }

namespace {

// Average of height * 1[lo,hi] over the cell [x - h/2, x + h/2].
double cell_average(double x, double h, double lo, double hi, double height) {
  const double l = std::max(x - h / 2, lo);
  const double r = std::min(x + h / 2, hi);
  return r > l ? height * (r - l) / h : 0.0;
}

// One application of the window-average kernel
//   out(x_i) = scale * integral of the PL interpolant of g over
//              [x-node jc - W, jc + W] nodes,
// where jc = center0 + a*(i - center0_i) is always node-aligned.
void window_pass(const std::vector<double>& g, std::vector<double>& out, long long M,
                 unsigned a, long long center_i, long long W, double h, double scale) {
  std::vector<double> prefix(g.size() + 1, 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) prefix[j + 1] = prefix[j] + g[j];
  auto value = [&](long long j) -> double {
    return (j >= 0 && j <= M) ? g[static_cast<std::size_t>(j)] : 0.0;
  };
  for (long long i = 0; i <= M; ++i) {
    const long long jc = center_i + static_cast<long long>(a) * (i - center_i);
    const long long jlo = jc - W, jhi = jc + W;
    const long long lo = std::max(jlo, 0ll), hi = std::min(jhi, M);
    double s = 0.0;
    if (lo <= hi) {
      s = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
      s -= 0.5 * (value(jlo) + value(jhi));
    }
    out[static_cast<std::size_t>(i)] = scale * h * s;
  }
}

void finish_grid(DensityGrid& grid, std::vector<double> g, double delta) {
  grid.pdf = std::move(g);
  grid.cdf.assign(grid.pdf.size(), 0.0);
  for (std::size_t i = 1; i < grid.pdf.size(); ++i)
    grid.cdf[i] = grid.cdf[i - 1] + grid.h * 0.5 * (grid.pdf[i - 1] + grid.pdf[i]);
  grid.truncation_bound = delta * grid.max_pdf();
}

}  // namespace

DensityGrid density_grid(unsigned a, std::size_t grid_M, unsigned iters) {
  if (a < 2) throw std::invalid_argument("density_grid: base must be >= 2");
  if (grid_M < 512 || grid_M % 2 != 0)
    throw std::invalid_argument("density_grid: grid_M must be even and >= 512");
  if (iters < 1) throw std::invalid_argument("density_grid: iters must be >= 1");

  const double b = support_halfwidth(a);
  const double h = 2.0 * b / static_cast<double>(grid_M - 2);
  if (h > b / 64) throw std::invalid_argument("density_grid: grid too coarse");

  DensityGrid grid;
  grid.base = a;
  grid.grid_m = grid_M;
  grid.iters = iters;
  grid.h = h;
  const long long M = static_cast<long long>(grid_M);
  const long long center = M / 2;
  grid.x0 = -static_cast<double>(center) * h;  // = -b - h

  // Seed with the depth-1 truncation U_1/a, sampled as cell averages so the
  // trapezoid mass of the interpolant is exactly 1.
  std::vector<double> g(grid_M + 1);
  for (long long i = 0; i <= M; ++i)
    g[static_cast<std::size_t>(i)] =
        cell_average(grid.x_at(static_cast<std::size_t>(i)), h, -b / a, b / a,
                     a / (2.0 * b));

  // Each pass maps the density of S onto (S + U)/a, so pass m yields the
  // depth-(m+1) truncated sum.
  std::vector<double> next(grid_M + 1);
  const long long W = (M - 2) / 2;  // b in grid steps
  for (unsigned it = 0; it < iters; ++it) {
    window_pass(g, next, M, a, center, W, h, a / (2.0 * b));
    std::swap(g, next);
  }

  // Coupling |S_(iters+1) - Z*| <= b a^-(iters+1)/(a-1).
  const double delta =
      b * std::pow(static_cast<double>(a), -static_cast<double>(iters + 1)) / (a - 1);
  finish_grid(grid, std::move(g), delta);
  return grid;
}

DensityGrid vstar_grid(unsigned a, std::size_t grid_M, unsigned iters) {
  if (a < 2) throw std::invalid_argument("vstar_grid: base must be >= 2");
  if (grid_M < 512 || grid_M % 2 != 0)
    throw std::invalid_argument("vstar_grid: grid_M must be even and >= 512");
  if (iters < 1) throw std::invalid_argument("vstar_grid: iters must be >= 1");

  const double span = 1.0 / (a - 1);
  const double h = span / static_cast<double>(grid_M - 2);

  DensityGrid grid;
  grid.base = a;
  grid.grid_m = grid_M;
  grid.iters = iters;
  grid.h = h;
  grid.x0 = -h;
  const long long M = static_cast<long long>(grid_M);

  std::vector<double> g(grid_M + 1);
  for (long long i = 0; i <= M; ++i)
    g[static_cast<std::size_t>(i)] =
        cell_average(grid.x_at(static_cast<std::size_t>(i)), h, 0.0, 1.0 / a,
                     static_cast<double>(a));

  // Kernel V -> (V' + V_u)/a with V_u uniform on [0,1]: window [a x - 1, a x].
  // a x_i sits on node a(i-1)+1 and the window spans 1/h = (a-1)(M-2) nodes.
  const long long Wn = static_cast<long long>(a - 1) * (M - 2);  // window nodes
  std::vector<double> next(grid_M + 1);
  std::vector<double> prefix(grid_M + 2, 0.0);
  for (unsigned it = 0; it < iters; ++it) {
    for (std::size_t j = 0; j < g.size(); ++j) prefix[j + 1] = prefix[j] + g[j];
    auto value = [&](long long j) -> double {
      return (j >= 0 && j <= M) ? g[static_cast<std::size_t>(j)] : 0.0;
    };
    for (long long i = 0; i <= M; ++i) {
      const long long jhi = static_cast<long long>(a) * (i - 1) + 1;
      const long long jlo = jhi - Wn;
      const long long lo = std::max(jlo, 0ll), hi = std::min(jhi, M);
      double s = 0.0;
      if (lo <= hi) {
        s = prefix[static_cast<std::size_t>(hi) + 1] -
            prefix[static_cast<std::size_t>(lo)];
        s -= 0.5 * (value(jlo) + value(jhi));
      }
      next[static_cast<std::size_t>(i)] = a * h * s;
    }
    std::swap(g, next);
  }

  const double delta = span * std::pow(static_cast<double>(a),
                                       -static_cast<double>(iters + 1));
  finish_grid(grid, std::move(g), delta);
  return grid;
}

ShiftScaleResult shift_scale_maps(unsigned a, double x, const DensityGrid& vstar) {
  if (vstar.base != a)
    throw std::invalid_argument("shift_scale_maps: grid was built for another base");
  const double b = support_halfwidth(a);
  ShiftScaleResult r;
  if (x < -b) return {0.0, 0.0};
  if (x > b) return {1.0, 0.0};
  // Z*(a) = 2 b V*(a) - b/(a-1); at a = 2 this is the (x+3)/6 map.
  const double v = (x + b / (a - 1)) / (2.0 * b);
  r.cdf = vstar.cdf_at(v);
  r.pdf = vstar.pdf_at(v) / (2.0 * b);
  return r;
}

void write_density_csv(const DensityGrid& grid, const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "x,pdf,cdf\n";
    char buf[128];
    for (std::size_t i = 0; i <= grid.grid_m; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.x_at(i), grid.pdf[i],
                    grid.cdf[i]);
      out << buf;
    }
  }
  std::filesystem::path side = csv_path;
  side.replace_extension(".json");
  std::ofstream out(side, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + side.string());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"a\": %u, \"grid_M\": %zu, \"iters\": %u, \"truncation_bound\": %.17g}\n",
                grid.base, grid.grid_m, grid.iters, grid.truncation_bound);
  out << buf;
}

}  // namespace partlim
