#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "partlim/montecarlo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

using namespace partlim;

TEST_CASE("batches are reproducible from the seed") {
  const auto a1 = sample_zn_direct(2, 4, 500, 99);
  const auto a2 = sample_zn_direct(2, 4, 500, 99);
  CHECK(a1.values == a2.values);
  const auto b1 = sample_zn_bernoulli(4, 500, 99);
  const auto b2 = sample_zn_bernoulli(4, 500, 99);
  CHECK(b1.values == b2.values);
  const auto z1 = sample_zstar(2, 20, 500, 99);
  const auto z2 = sample_zstar(2, 20, 500, 99);
  CHECK(z1.values == z2.values);
  CHECK(sample_zn_direct(2, 4, 500, 100).values != a1.values);
}

TEST_CASE("draws respect the support") {
  const auto zn = sample_zn_direct(2, 5, 20000, 7);
  for (double v : zn.values) {
    CHECK(v >= 0);
    CHECK(v <= 57);  // 2(2^5 - 1) - 5 = 2^6 - 5 - 2
  }
  const double b = support_halfwidth(2);
  const auto zs = sample_zstar(2, 30, 20000, 7);
  for (double v : zs.values) CHECK(std::abs(v) <= b);

  // K = 1 is a single scaled uniform on [-3/2, 3/2]
  const auto z1 = sample_zstar(2, 1, 20000, 7);
  double lo = 0, hi = 0;
  for (double v : z1.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= -1.5);
  CHECK(hi <= 1.5);
  CHECK(lo < -1.45);
  CHECK(hi > 1.45);
}

TEST_CASE("empirical moments sit inside 4 standard errors") {
  const std::size_t n = 200000;
  for (unsigned N : {2u, 5u, 10u}) {
    const auto batch = sample_zn_direct(2, N, n, 20250);
    const auto stats = batch_stats(batch);
    const auto [mean, var] = mean_variance(2, N);
    const double sigma = std::sqrt(to_double(var));
    const double se_mean = sigma / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(stats.mean - to_double(mean)) < 4 * se_mean);

    // Var(s^2) ~ (mu4 - sigma^4)/n with mu4 = (kappa4_hat + 3) sigma^4
    const double k4 = to_double(standardized_cumulants(2, N, 2).kappa2n(2));
    const double mu4 = (k4 + 3.0) * std::pow(to_double(var), 2);
    const double se_var =
        std::sqrt((mu4 - std::pow(to_double(var), 2)) / static_cast<double>(n));
    CHECK(std::abs(stats.variance - to_double(var)) < 4 * se_var);
  }
}

TEST_CASE("empirical pmf lands in multinomial bands") {
  const std::size_t n = 100000;
  const auto batch = sample_zn_direct(2, 2, n, 41);
  const auto p = pmf(expand_coeffs(2, 2));
  std::vector<double> freq(p.size(), 0);
  for (double v : batch.values) freq[static_cast<std::size_t>(v)] += 1.0 / n;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double pk = to_double(p[k]);
    const double band = 4 * std::sqrt(pk * (1 - pk) / static_cast<double>(n));
    CHECK(std::abs(freq[k] - pk) < band);
  }
}

TEST_CASE("bernoulli representation matches the exact pmf") {
  const auto b1 = sample_zn_bernoulli(1, 50000, 5);
  const auto s = batch_stats(b1);
  CHECK(std::abs(s.mean - 0.5) < 4 * 0.5 / std::sqrt(50000.0));

  const auto b3 = sample_zn_bernoulli(3, 1000000, 7);
  const auto p3 = pmf(expand_coeffs(2, 3));
  const auto gof = chi_square_vs_pmf(b3, p3);
  CHECK(gof.df == 11);  // 12 atoms, none merged at this count
  CHECK(gof.p_value > 0.001);
}

TEST_CASE("direct and bernoulli samplers agree in distribution") {
  for (unsigned N = 1; N <= 4; ++N) {
    const auto x = sample_zn_direct(2, N, 400000, 1234);
    const auto y = sample_zn_bernoulli(N, 400000, 4321);
    const auto two = chi_square_two_sample(x, y);
    CHECK(two.p_value > 0.001);
  }
}

TEST_CASE("zstar moments approach the limit law") {
  const std::size_t n = 1000000;
  const auto batch = sample_zstar(2, 30, n, 7);
  const auto stats = batch_stats(batch);
  // SE of the m4 estimate from m8 - m4^2
  const auto m = moments_rec1(4);
  const double m4 = to_double(m[2]), m8 = to_double(m[4]);
  const double se_m4 = std::sqrt((m8 - m4 * m4) / static_cast<double>(n));
  CHECK(std::abs(stats.m4 - m4) < 3 * se_m4);
  CHECK(std::abs(stats.mean) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chi-square helper behaves") {
  CHECK(chi_square_pvalue(0.0, 5) == doctest::Approx(1.0));
  // df = 2: tail is exp(-x/2)
  for (double x : {0.5, 2.0, 7.0})
    CHECK(chi_square_pvalue(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-10));
  // df = 1: tail is erfc(sqrt(x/2))
  CHECK(chi_square_pvalue(1.0, 1) ==
        doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-10));
  CHECK_THROWS_AS(gamma_q(-1.0, 2.0), std::invalid_argument);

  SampleBatch bad{"zn", 2, 1, 0, {5.0}};
  CHECK_THROWS_AS(chi_square_vs_pmf(bad, pmf(expand_coeffs(2, 1))),
                  std::invalid_argument);
}

TEST_CASE("exact ks distances shrink with N") {
  const DensityGrid grid = density_grid(2, 4096, 30);
  const KsReport rep = ks_convergence(2, {2, 6, 10}, grid, 20000, 11);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.entries[0].exact_ks == doctest::Approx(0.141894).epsilon(1e-4));
  CHECK(rep.entries[0].exact_ks > rep.entries[1].exact_ks);
  CHECK(rep.entries[1].exact_ks > rep.entries[2].exact_ks);
  // the sampled overlay roughly tracks the exact distance
  CHECK(rep.entries[0].empirical_ks ==
        doctest::Approx(rep.entries[0].exact_ks).epsilon(0.15));
}

TEST_CASE("batch export writes csv and sidecar") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "partlim-batch-test";
  fs::create_directories(dir);
  const auto csv = dir / "batch.csv";

  const auto batch = sample_zstar(3, 12, 100, 3);
  write_batch_csv(batch, csv);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "value");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 100);

  nlohmann::json side;
  std::ifstream(dir / "batch.json") >> side;
  CHECK(side["model"] == "zstar");
  CHECK(side["a"] == 3);
  CHECK(side["K"] == 12);
  CHECK(side["seed"] == 3);
  CHECK(side["count"] == 100);
  fs::remove_all(dir);
}

TEST_CASE("sampler rejects out-of-range parameters") {
  CHECK_THROWS_AS(sample_zn_direct(1, 3, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_zn_direct(2, 60, 10, 0), BudgetError);
  CHECK_THROWS_AS(sample_zn_direct(2, 3, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_zstar(2, 0, 10, 0), std::invalid_argument);
}
