// Restricted-partition coefficient rows alpha_k^(N)(a): exact expansion of
// prod_{j=1..N} (x^(a^j) - 1)/(x - 1), brute-force enumeration oracle, the
// binary digit-sum identities, OEIS b-file cross-checking and cache files.
#pragma once

#include "partlim/exact.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace partlim {

// Raised when a computation would exceed a configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a cross-check that must hold fails (oracle diff, bad cache...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoeffTable {
  unsigned base = 2;   // a >= 2
  unsigned order = 1;  // N >= 1
  std::vector<Integer> row;
  Integer total;  // a^(N(N+1)/2) = sum of row

  std::size_t last_index() const { return row.size() - 1; }
};

// Row length a(a^N - 1)/(a - 1) - N + 1 as an Integer (may exceed size_t).
Integer coeff_row_length(unsigned a, unsigned N);

struct ExpandOptions {
  std::size_t max_row_entries = std::size_t(1) << 28;
  // For a = 2, also expand the (1 + x^(2^i))^(N-i) product form and require
  // entrywise equality.
  bool verify_alt_form = false;
};

CoeffTable expand_coeffs(unsigned a, unsigned N, const ExpandOptions& opts = {});

// Counts tuples (k_1..k_N), 0 <= k_j <= a^j - 1, by their sum. Independent of
// the polynomial path; refuses when a^(N(N+1)/2) exceeds max_tuples.
CoeffTable brute_force_coeffs(unsigned a, unsigned N,
                              unsigned long long max_tuples = 1ull << 27);

// Palindrome, endpoints, positivity and total-sum invariants; throws
// ValidationError on the first violation.
void validate_table(const CoeffTable& t);

// Base-2 digit-sum convolution: sum_{n=0}^{min(j, 2^(N+1)-1)}
// C(j-n+N, N) (-1)^(s2(n)). Equals expand_coeffs(2, N).row[j] on the natural
// range and stays defined for every j >= 0.
Integer coeff_via_s2(const Integer& j, unsigned N);

// Evaluates sum_k C(N,k)(-1)^k alpha_{n-k}^(N-1); the result equals
// (-1)^(s2(n)) for 0 <= n <= 2^N - 1.
Integer invert_s2_check(const Integer& n, unsigned N);

// Integer-indexed table of exact values on [lo, lo + values.size()).
struct ValueTable {
  long long lo = 0;
  std::vector<Rational> values;

  const Rational& at(long long i) const;
  bool covers(long long first, long long last) const;
};

// T_N(x): the multiple sum of g over the box [0,1] x [0,3] x ... x [0,2^N-1]
// versus the alpha-weighted single sum; exact comparison.
bool appendix_tn_check(unsigned N, const ValueTable& g, long long x,
                       unsigned long long max_tuples = 1ull << 24);

// sum_{n<2^N} (-1)^(s2(n)) f(x+n)  ==  (-1)^N sum_k alpha_k^(N-1) D^N f(x+k)
// with D the forward difference.
bool finite_difference_check(unsigned N, const ValueTable& f, long long x);

// --- OEIS b-file ingestion -------------------------------------------------

struct BFileEntry {
  long long index = 0;
  Integer value;
};

// "index value" per line, '#' comments and blank lines skipped. Throws
// ValidationError with the line number on malformed input.
std::vector<BFileEntry> parse_bfile(std::istream& in);
std::vector<BFileEntry> parse_bfile_file(const std::filesystem::path& path);

struct OeisRowReport {
  unsigned order = 0;          // N
  std::size_t compared = 0;    // entries available in the b-file for this row
  std::size_t row_length = 0;  // expected 2^(N+1) - N - 1
  std::size_t matched = 0;
  std::vector<std::size_t> mismatch_positions;  // k within the row
  bool fully_covered() const { return compared == row_length; }
  bool clean() const { return mismatch_positions.empty(); }
};

struct OeisReport {
  unsigned start_order = 0;  // order assumed for the first flat entry
  std::vector<OeisRowReport> rows;
  bool all_match() const;
};

// Interprets the b-file as the triangle rows of orders start_order,
// start_order+1, ... flattened, and compares rows 1..n_max against freshly
// expanded tables (base 2). Row-length/coverage problems are reported, not
// thrown.
OeisReport oeis_crosscheck(unsigned n_max, const std::vector<BFileEntry>& bfile,
                           unsigned start_order);

// --- coefficient cache files ------------------------------------------------
// Header "partlim-coeffs v1 a=<a> N=<N> len=<L>" then L decimal entries, one
// per line. Round-trips bit-exactly; writes go to a temp file then rename.

std::filesystem::path coeff_cache_path(const std::filesystem::path& dir,
                                       unsigned a, unsigned N);
void write_coeff_cache(const CoeffTable& t, const std::filesystem::path& dir);
CoeffTable read_coeff_cache(const std::filesystem::path& file);

}  // namespace partlim
