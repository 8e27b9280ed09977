// Seeded samplers for Z_N(a) (direct and Bernoulli-bit representations) and
// for truncated Z*(a), with goodness-of-fit statistics against the exact
// distributions.
//
// Reproducibility contract: the generator is std::mt19937_64, which the
// standard pins bit-for-bit. Every random variable index owns its own stream,
// seeded by SplitMix64 from (master seed, stream id), so draw order within a
// stream never depends on scheduling.
#pragma once

#include "partlim/dist.hpp"
#include "partlim/limitlaw.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace partlim {

struct SampleBatch {
  std::string model;          // "zn" | "zn-bernoulli" | "zstar"
  unsigned base = 2;          // a
  unsigned param = 0;         // N for Z_N models, K for zstar
  std::uint64_t seed = 0;
  std::vector<double> values; // integer-valued for the Z_N models
};

SampleBatch sample_zn_direct(unsigned a, unsigned N, std::size_t count,
                             std::uint64_t seed);
// Base-2 only: nested sums of 2^i-weighted fair bits, one bit group per
// summand index.
SampleBatch sample_zn_bernoulli(unsigned N, std::size_t count, std::uint64_t seed);
// Depth-K truncation of Z*(a); every draw lies in [-b_a, b_a]. The gap to an
// untruncated draw is at most b_a a^-K/(a-1) almost surely.
SampleBatch sample_zstar(unsigned a, unsigned K, std::size_t count,
                         std::uint64_t seed);

struct MomentStats {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double m4 = 0;        // fourth moment about zero
};
MomentStats batch_stats(const SampleBatch& batch);

// Upper regularized incomplete gamma Q(s, x); chi-square tail probability is
// Q(df/2, stat/2).
double gamma_q(double s, double x);
double chi_square_pvalue(double statistic, unsigned df);

struct ChiSquareResult {
  double statistic = 0;
  unsigned df = 0;
  double p_value = 1;
};

// One-sample test of an integer-valued batch against an exact pmf on
// {0, ..., len-1}. Low-expectation tail bins are merged until every bin
// expects at least min_expected counts.
ChiSquareResult chi_square_vs_pmf(const SampleBatch& batch,
                                  const std::vector<Rational>& probabilities,
                                  double min_expected = 5.0);

// Two-sample chi-square over the union support of two integer-valued batches.
ChiSquareResult chi_square_two_sample(const SampleBatch& x, const SampleBatch& y,
                                      double min_expected = 5.0);

struct KsEntry {
  unsigned order = 0;      // N
  double exact_ks = 0;     // exact step-CDF of standardized Z_N vs grid CDF
  double empirical_ks = 0; // sampled overlay, same comparison
};
struct KsReport {
  unsigned base = 2;
  std::vector<KsEntry> entries;
};

// Exact Kolmogorov distances between the standardized pmf step-CDFs and the
// grid CDF; sampling only feeds the overlay column.
KsReport ks_convergence(unsigned a, const std::vector<unsigned>& orders,
                        const DensityGrid& grid, std::size_t count,
                        std::uint64_t seed);

// CSV with a "value" column plus a JSON sidecar (model, a, param, seed, count)
// at the same path with extension ".json".
void write_batch_csv(const SampleBatch& batch, const std::filesystem::path& csv_path);

namespace rng {

std::uint64_t splitmix64(std::uint64_t& state);
// Independent engine for (seed, stream); mt19937_64 seeded from SplitMix64.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream);
// Rejection from the top bits; no modulo bias.
std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound);
double uniform_01(std::mt19937_64& eng);  // [0, 1), 53-bit

}  // namespace rng

}  // namespace partlim
