#include "partlim/coeffs.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace partlim {

Integer coeff_row_length(unsigned a, unsigned N) {
  // a(a^N - 1)/(a - 1) - N + 1
  Integer span = Integer(a) * (ui_pow(a, N) - 1) / (a - 1);
  return span - N + 1;
}

namespace {

void check_params(unsigned a, unsigned N) {
  if (a < 2) throw std::invalid_argument("coeffs: base must be >= 2");
  if (N < 1) throw std::invalid_argument("coeffs: order must be >= 1");
}

Integer table_total(unsigned a, unsigned N) {
  return ui_pow(a, static_cast<unsigned long>(N) * (N + 1) / 2);
}

// Multiply the dense row by the all-ones block 1 + x + ... + x^(m-1).
// Each output entry is a sliding-window sum of the input, maintained as a
// running accumulator: one add and one sub per entry.
std::vector<Integer> multiply_block(const std::vector<Integer>& row, std::size_t m) {
  std::vector<Integer> out(row.size() + m - 1);
  Integer run(0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < row.size()) run += row[k];
    if (k >= m) run -= row[k - m];
    out[k] = run;
  }
  return out;
}

// Multiply by the sparse factor 1 + x^step.
std::vector<Integer> multiply_binary(const std::vector<Integer>& row, std::size_t step) {
  std::vector<Integer> out(row.size() + step);
  for (std::size_t k = 0; k < row.size(); ++k) out[k] = row[k];
  for (std::size_t k = 0; k < row.size(); ++k) out[k + step] += row[k];
  return out;
}

// Base-2 row for any order >= 0 (order 0 is the empty product).
std::vector<Integer> base2_row(unsigned order) {
  std::vector<Integer> row{Integer(1)};
  for (unsigned j = 1; j <= order; ++j)
    row = multiply_block(row, std::size_t(1) << j);
  return row;
}

}  // namespace

CoeffTable expand_coeffs(unsigned a, unsigned N, const ExpandOptions& opts) {
  check_params(a, N);
  const Integer length = coeff_row_length(a, N);
  if (length > Integer(static_cast<unsigned long>(opts.max_row_entries))) {
    throw BudgetError("expand_coeffs: row of " + length.get_str() +
                      " entries exceeds the memory budget");
  }

  CoeffTable t;
  t.base = a;
  t.order = N;
  t.total = table_total(a, N);
  // Smallest factor first keeps the intermediate rows short.
  std::vector<Integer> row{Integer(1)};
  unsigned long long m = 1;
  for (unsigned j = 1; j <= N; ++j) {
    m *= a;
    row = multiply_block(row, static_cast<std::size_t>(m));
  }
  t.row = std::move(row);

  if (opts.verify_alt_form && a == 2) {
    std::vector<Integer> alt{Integer(1)};
    for (unsigned i = 0; i < N; ++i)
      for (unsigned rep = 0; rep < N - i; ++rep)
        alt = multiply_binary(alt, std::size_t(1) << i);
    if (alt != t.row)
      throw ValidationError("expand_coeffs: block and binary product forms disagree");
  }
  return t;
}

CoeffTable brute_force_coeffs(unsigned a, unsigned N, unsigned long long max_tuples) {
  check_params(a, N);
  const Integer tuples = table_total(a, N);
  if (tuples > Integer(static_cast<unsigned long>(max_tuples)))
    throw BudgetError("brute_force_coeffs: " + tuples.get_str() +
                      " tuples exceed the enumeration budget");

  const Integer length = coeff_row_length(a, N);
  std::vector<unsigned long long> counts(length.get_ui(), 0);

  // Odometer over (k_1, ..., k_N), k_j in [0, a^j - 1], tracking the sum.
  std::vector<unsigned long long> limit(N + 1), k(N + 1, 0);
  unsigned long long lim = 1;
  for (unsigned j = 1; j <= N; ++j) {
    lim *= a;
    limit[j] = lim;  // a^j
  }
  unsigned long long sum = 0;
  while (true) {
    ++counts[static_cast<std::size_t>(sum)];
    int j = static_cast<int>(N);
    for (; j >= 1; --j) {
      ++k[j];
      ++sum;
      if (k[j] < limit[j]) break;
      sum -= k[j];
      k[j] = 0;
    }
    if (j == 0) break;
  }

  CoeffTable t;
  t.base = a;
  t.order = N;
  t.total = tuples;
  t.row.reserve(counts.size());
  for (unsigned long long c : counts)
    t.row.emplace_back(static_cast<unsigned long>(c));
  return t;
}

void validate_table(const CoeffTable& t) {
  if (t.row.empty()) throw ValidationError("coeff table: empty row");
  if (t.row.front() != 1 || t.row.back() != 1)
    throw ValidationError("coeff table: endpoints are not 1");
  Integer sum(0);
  for (std::size_t k = 0; k < t.row.size(); ++k) {
    if (t.row[k] <= 0) throw ValidationError("coeff table: nonpositive entry");
    if (t.row[k] != t.row[t.row.size() - 1 - k])
      throw ValidationError("coeff table: row is not palindromic");
    sum += t.row[k];
  }
  if (sum != t.total)
    throw ValidationError("coeff table: row sum differs from a^(N(N+1)/2)");
}

Integer coeff_via_s2(const Integer& j, unsigned N) {
  if (j < 0) throw std::invalid_argument("coeff_via_s2: negative index");
  Integer cap = ui_pow(2, N + 1) - 1;
  if (j < cap) cap = j;
  Integer acc(0);
  for (Integer n(0); n <= cap; ++n) {
    const Integer b = binomial(j - n + N, static_cast<long>(N));
    if (s2(n) % 2 == 0)
      acc += b;
    else
      acc -= b;
  }
  return acc;
}

Integer invert_s2_check(const Integer& n, unsigned N) {
  if (N < 1 || N >= 63) throw std::invalid_argument("invert_s2_check: order out of range");
  if (n < 0 || n > ui_pow(2, N) - 1)
    throw std::invalid_argument("invert_s2_check: index outside [0, 2^N - 1]");
  const std::vector<Integer> alpha = base2_row(N - 1);
  const unsigned long long nn = n.get_ui();
  Integer acc(0);
  for (unsigned long long k = 0; k <= std::min<unsigned long long>(N, nn); ++k) {
    const unsigned long long idx = nn - k;
    if (idx >= alpha.size()) continue;
    const Integer term = binomial(Integer(N), static_cast<long>(k)) * alpha[idx];
    if (k % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

const Rational& ValueTable::at(long long i) const {
  if (i < lo || i >= lo + static_cast<long long>(values.size()))
    throw std::out_of_range("value table: index " + std::to_string(i) +
                            " outside covered window");
  return values[static_cast<std::size_t>(i - lo)];
}

bool ValueTable::covers(long long first, long long last) const {
  return first >= lo && last < lo + static_cast<long long>(values.size());
}

bool appendix_tn_check(unsigned N, const ValueTable& g, long long x,
                       unsigned long long max_tuples) {
  if (N < 1 || N >= 63) throw std::invalid_argument("appendix_tn_check: order out of range");
  const Integer tuples = table_total(2, N);
  if (tuples > Integer(static_cast<unsigned long>(max_tuples)))
    throw BudgetError("appendix_tn_check: enumeration budget exceeded");

  const std::vector<Integer> alpha = base2_row(N);
  const long long top = x + static_cast<long long>(alpha.size()) - 1;
  if (!g.covers(x, top))
    throw std::out_of_range("appendix_tn_check: value table does not cover the window");

  Rational weighted(0);
  for (std::size_t k = 0; k < alpha.size(); ++k)
    weighted += Rational(alpha[k]) * g.at(x + static_cast<long long>(k));

  Rational direct(0);
  std::vector<unsigned long long> limit(N + 1), k(N + 1, 0);
  for (unsigned j = 1; j <= N; ++j) limit[j] = 1ull << j;
  unsigned long long sum = 0;
  while (true) {
    direct += g.at(x + static_cast<long long>(sum));
    int j = static_cast<int>(N);
    for (; j >= 1; --j) {
      ++k[j];
      ++sum;
      if (k[j] < limit[j]) break;
      sum -= k[j];
      k[j] = 0;
    }
    if (j == 0) break;
  }
  return direct == weighted;
}

bool finite_difference_check(unsigned N, const ValueTable& f, long long x) {
  if (N < 1 || N >= 63)
    throw std::invalid_argument("finite_difference_check: order out of range");
  const unsigned long long span = 1ull << N;  // f needed on [x, x + 2^N - 1]
  if (!f.covers(x, x + static_cast<long long>(span) - 1))
    throw std::out_of_range("finite_difference_check: value table does not cover the window");

  Rational lhs(0);
  for (unsigned long long n = 0; n < span; ++n) {
    const Rational& v = f.at(x + static_cast<long long>(n));
    if (s2(Integer(static_cast<unsigned long>(n))) % 2 == 0)
      lhs += v;
    else
      lhs -= v;
  }

  const std::vector<Integer> alpha = base2_row(N - 1);  // 2^N - N entries
  Rational rhs(0);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    Rational diff(0);  // D^N f(x + k)
    for (unsigned i = 0; i <= N; ++i) {
      Rational term = Rational(binomial(Integer(N), static_cast<long>(i))) *
                      f.at(x + static_cast<long long>(k) + i);
      if ((N - i) % 2 == 0)
        diff += term;
      else
        diff -= term;
    }
    rhs += Rational(alpha[k]) * diff;
  }
  if (N % 2 == 1) rhs = -rhs;
  return lhs == rhs;
}

std::vector<BFileEntry> parse_bfile(std::istream& in) {
  std::vector<BFileEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string idx_tok, val_tok, extra;
    if (!(ls >> idx_tok)) continue;  // blank
    if (!(ls >> val_tok) || (ls >> extra))
      throw ValidationError("b-file line " + std::to_string(lineno) +
                            ": expected \"index value\"");
    BFileEntry e;
    try {
      e.index = std::stoll(idx_tok);
    } catch (const std::exception&) {
      throw ValidationError("b-file line " + std::to_string(lineno) + ": bad index");
    }
    if (mpz_set_str(e.value.get_mpz_t(), val_tok.c_str(), 10) != 0)
      throw ValidationError("b-file line " + std::to_string(lineno) + ": bad value");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<BFileEntry> parse_bfile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open b-file: " + path.string());
  return parse_bfile(in);
}

bool OeisReport::all_match() const {
  for (const auto& r : rows)
    if (!r.clean() || !r.fully_covered()) return false;
  return !rows.empty();
}

OeisReport oeis_crosscheck(unsigned n_max, const std::vector<BFileEntry>& bfile,
                           unsigned start_order) {
  OeisReport report;
  report.start_order = start_order;
  // Flat offset of row N under the assumed start order.
  auto row_len = [](unsigned N) -> std::size_t {
    return static_cast<std::size_t>((1ull << (N + 1)) - N - 1);
  };
  for (unsigned N = std::max(1u, start_order); N <= n_max; ++N) {
    std::size_t offset = 0;
    for (unsigned M = start_order; M < N; ++M) offset += row_len(M);

    OeisRowReport rr;
    rr.order = N;
    rr.row_length = row_len(N);
    const CoeffTable t = expand_coeffs(2, N);
    for (std::size_t k = 0; k < rr.row_length; ++k) {
      const std::size_t flat = offset + k;
      if (flat >= bfile.size()) break;
      ++rr.compared;
      if (bfile[flat].value == t.row[k])
        ++rr.matched;
      else
        rr.mismatch_positions.push_back(k);
    }
    report.rows.push_back(std::move(rr));
  }
  return report;
}

std::filesystem::path coeff_cache_path(const std::filesystem::path& dir, unsigned a,
                                       unsigned N) {
  return dir / ("coeffs-a" + std::to_string(a) + "-N" + std::to_string(N) + ".txt");
}

void write_coeff_cache(const CoeffTable& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto target = coeff_cache_path(dir, t.base, t.order);
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file: " + tmp);
    out << "partlim-coeffs v1 a=" << t.base << " N=" << t.order
        << " len=" << t.row.size() << "\n";
    for (const Integer& v : t.row) out << v << "\n";
    if (!out) throw std::runtime_error("short write on cache file: " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

CoeffTable read_coeff_cache(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open cache file: " + file.string());
  std::string header;
  std::getline(in, header);
  unsigned a = 0, N = 0;
  unsigned long long len = 0;
  if (std::sscanf(header.c_str(), "partlim-coeffs v1 a=%u N=%u len=%llu", &a, &N,
                  &len) != 3)
    throw ValidationError("cache file header not recognized: " + file.string());
  CoeffTable t;
  t.base = a;
  t.order = N;
  t.total = table_total(a, N);
  t.row.reserve(len);
  std::string tok;
  for (unsigned long long i = 0; i < len; ++i) {
    if (!(in >> tok))
      throw ValidationError("cache file truncated: " + file.string());
    Integer v;
    if (mpz_set_str(v.get_mpz_t(), tok.c_str(), 10) != 0)
      throw ValidationError("cache file entry " + std::to_string(i) + " malformed");
    t.row.push_back(std::move(v));
  }
  validate_table(t);
  return t;
}

}  // namespace partlim
