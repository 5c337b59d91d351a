#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "d2dcov/rng.hpp"

using d2dcov::RngStream;
using d2dcov::StreamPurpose;

TEST_CASE("equal stream addresses give bit-identical sequences") {
  RngStream a(42, 7, 3);
  RngStream b(42, 7, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream addresses diverge") {
  const auto first_words = [](RngStream s) {
    std::vector<std::uint64_t> w(8);
    for (auto& x : w) x = s.next_u64();
    return w;
  };
  const auto base = first_words(RngStream(42, 7, 3));
  CHECK(first_words(RngStream(43, 7, 3)) != base);
  CHECK(first_words(RngStream(42, 8, 3)) != base);
  CHECK(first_words(RngStream(42, 7, 4)) != base);
}

TEST_CASE("substream() is equivalent to direct substream addressing") {
  RngStream direct(42, 7, static_cast<std::uint64_t>(StreamPurpose::kFadingMarks));
  RngStream derived = RngStream(42, 7).substream(StreamPurpose::kFadingMarks);
  for (int i = 0; i < 64; ++i) CHECK(direct.next_u64() == derived.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) with mean 1/2") {
  RngStream rng(1, 0, 0);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("exponential draws are nonnegative with unit mean") {
  RngStream rng(2, 0, 0);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential();
    REQUIRE(e >= 0.0);
    sum += e;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.015));
}

TEST_CASE("poisson matches its mean and dispersion") {
  RngStream rng(3, 0, 0);
  const double mean = 19.6349;
  const int n = 100000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double c = static_cast<double>(rng.poisson(mean));
    sum += c;
    sumsq += c * c;
  }
  const double sample_mean = sum / n;
  const double sample_var = sumsq / n - sample_mean * sample_mean;
  CHECK(std::fabs(sample_mean - mean) < 0.05);
  // Index of dispersion -> 1 for a Poisson law; se ~ sqrt(2/n).
  CHECK(std::fabs(sample_var / sample_mean - 1.0) < 0.02);
}

TEST_CASE("poisson edge cases") {
  RngStream rng(4, 0, 0);
  for (int i = 0; i < 100; ++i) CHECK(rng.poisson(0.0) == 0);
  CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.poisson(1e9), std::overflow_error);
}

TEST_CASE("coin is fair") {
  RngStream rng(5, 0, 0);
  int heads = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) heads += rng.coin() ? 1 : 0;
  CHECK(std::fabs(static_cast<double>(heads) / n - 0.5) < 0.006);
}
