#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../oracle/trajectory_oracle.hpp"
#include "../support/random_params.hpp"
#include "gesim/bounds.hpp"
#include "gesim/error.hpp"
#include "gesim/exactdist.hpp"

using namespace gesim;

namespace {

ChannelParams params(double mu, double eps) {
  ChannelParams p;
  p.mu = mu;
  p.epsilon = eps;
  return p;
}

}  // namespace

TEST_CASE("k_subsets are lexicographic") {
  const auto s = k_subsets(4, 2);
  const std::vector<std::uint32_t> expect{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100};
  CHECK(s == expect);
  CHECK(k_subsets(5, 3).size() == 10);
}

TEST_CASE("indicator_d examples") {
  SubsetCollection w{3, 2, {}};
  // k_subsets(3,2): {0,1}, {0,2}, {1,2}
  w.members = {0, 1};
  CHECK(indicator_d(w, 0b111));
  CHECK_FALSE(indicator_d(w, 0b000));
  CHECK(indicator_d(w, 0b001));       // sensor 1 Good
  CHECK_FALSE(indicator_d(w, 0b010)); // {1,3} uncovered
  const auto d = coverage_indicator(w);
  for (StateIndex i = 0; i < 8; ++i) CHECK(d.test(i) == indicator_d(w, i));
}

TEST_CASE("transition matrix") {
  const std::vector<ChannelParams> one{params(0.2, 0.3)};
  const auto q1 = build_q(one);
  CHECK(q1(1, 1) == doctest::Approx(0.7));
  CHECK(q1(0, 1) == doctest::Approx(0.3));
  CHECK(q1(1, 0) == doctest::Approx(0.2));
  CHECK(q1(0, 0) == doctest::Approx(0.8));

  const std::vector<ChannelParams> two(2, params(0.2, 0.3));
  CHECK(build_q(two)(3, 3) == doctest::Approx(0.49));

  SplitMix64 g(1);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto ps = testing_support::random_params(g, n);
    const auto q = build_q(ps);
    for (StateIndex l = 0; l < q.dim(); ++l) {
      double col = 0.0;
      for (StateIndex i = 0; i < q.dim(); ++i) col += q(i, l);
      CHECK(col == doctest::Approx(1.0).epsilon(1e-13));
    }
    // The steady state is stationary under Q.
    const auto pi = steady_state_joint(ps);
    for (StateIndex i = 0; i < q.dim(); ++i) {
      double next = 0.0;
      for (StateIndex l = 0; l < q.dim(); ++l) next += q(i, l) * pi[l];
      CHECK(next == doctest::Approx(pi[i]).epsilon(1e-12));
    }
  }
  ExactLimits small;
  small.max_sensors_matrix = 3;
  CHECK_THROWS_AS(build_q(testing_support::random_params(g, 4), small), CapacityError);
}

TEST_CASE("collection probability examples") {
  SplitMix64 g(3);
  const auto ps = testing_support::random_params(g, 3);
  SubsetCollection all{3, 3, {0}};
  double bad = 1.0;
  for (const auto& p : ps) bad *= p.epsilon / (p.epsilon + p.mu);
  CHECK(collection_probability(all, 1, ps) == doctest::Approx(1.0 - bad).epsilon(1e-13));

  SubsetCollection single{3, 1, {1}};
  for (std::size_t m : {1u, 5u, 40u}) {
    const auto& p = ps[1];
    CHECK(collection_probability(single, m, ps) ==
          doctest::Approx(p.mu / (p.mu + p.epsilon) * std::pow(1 - p.epsilon, double(m - 1))).epsilon(1e-12));
  }

  const std::vector<ChannelParams> half(2, params(0.5, 0.5));
  SubsetCollection both{2, 1, {0, 1}};
  CHECK(collection_probability(both, 2, half) == doctest::Approx(0.0625));
}

TEST_CASE("coverage mass never increases") {
  SplitMix64 g(4);
  for (int t = 0; t < 20; ++t) {
    const auto ps = testing_support::random_params(g, 3);
    const auto q = build_q(ps);
    SubsetCollection w{3, 2, {0, 2}};
    const auto prof = coverage_mass_profile(coverage_indicator(w), 30, ps, q);
    for (std::size_t m = 1; m < prof.size(); ++m) CHECK(prof[m] <= prof[m - 1] + 1e-15);
  }
}

TEST_CASE("two sensors, two bits, fair chain") {
  const std::vector<ChannelParams> ps(2, params(0.5, 0.5));
  CHECK(cmf_exact(1, 2, ps).value == doctest::Approx(0.4375).epsilon(1e-14));
  CHECK(cmf_exact(2, 2, ps).value == doctest::Approx(0.5625).epsilon(1e-14));
  const auto d = k_distribution(2, ps);
  CHECK(d.pmf[0] == doctest::Approx(0.4375));
  CHECK(d.pmf[1] == doctest::Approx(0.5625));
  CHECK(d.expected == doctest::Approx(1.5625));
  CHECK(d.raw_cmf[1] == doctest::Approx(0.5625));
}

TEST_CASE("agreement with trajectory enumeration") {
  SplitMix64 g(99);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      for (int t = 0; t < 5; ++t) {
        const auto ps = testing_support::random_params(g, n);
        const auto ref = oracle::brute_force(ps, m);
        ExactAnalyzer a(ps, m);
        for (std::size_t k = 1; k <= n; ++k) CHECK(std::abs(a.cmf(k).raw - ref.raw_cmf[k - 1]) < 1e-10);
        CHECK(std::abs(a.distribution().expected - ref.expected_forced) < 1e-10);
      }
    }
  }
}

TEST_CASE("closed-form F_K(1) and monotone cmf") {
  SplitMix64 g(5);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + g() % 4;
    const std::size_t m = 1 + g() % 50;
    const auto ps = testing_support::random_params(g, n);
    ExactAnalyzer a(ps, m);
    CHECK(std::abs(a.cmf(1).value - fk1_closed_form(ps, m)) < 1e-10);
    const auto d = a.distribution();
    for (std::size_t k = 1; k < n; ++k) CHECK(d.cmf[k] >= d.cmf[k - 1] - 1e-12);
    double total = 0.0;
    for (double f : d.pmf) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Bonferroni truncation is a lower bound and flags negatives") {
  const std::vector<ChannelParams> ps(4, params(0.0191, 0.0256));
  ExactAnalyzer a(ps, 64);
  bool saw_clamp = false;
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto full = a.cmf(k);
    CHECK_FALSE(full.truncated);
    const std::size_t n_k = k_subsets(4, k).size();
    for (std::size_t l = 1; 2 * l < n_k; ++l) {
      const auto b = a.cmf(k, l);
      CHECK(b.truncated);
      CHECK(b.max_depth == 2 * l);
      CHECK(b.raw <= full.raw + 1e-12);
      CHECK(b.clamped == (b.raw < -1e-9));
      saw_clamp = saw_clamp || b.clamped;
    }
  }
  CHECK(saw_clamp);
  CHECK_THROWS_AS(a.cmf(2, 0), ArgumentError);
}

TEST_CASE("capacity limits") {
  const std::vector<ChannelParams> ps(6, params(0.2, 0.2));
  CHECK_THROWS_AS(k_distribution(16, ps), CapacityError);
  ExactAnalyzer a(ps, 16);
  CHECK_THROWS_AS(a.cmf(3), CapacityError);
  CHECK_NOTHROW(a.cmf(3, 1));
  ExactLimits tight;
  tight.max_truncated_collections = 10;
  ExactAnalyzer b(ps, 16, tight);
  CHECK_THROWS_AS(b.cmf(3, 1), CapacityError);
}

TEST_CASE("five sensors, 128 bits, slow fading") {
  const std::vector<ChannelParams> ps(5, params(0.0191, 0.0256));
  ExactAnalyzer a(ps, 128);
  const auto d = a.distribution();
  CHECK(std::abs(d.raw_cmf[4] - 0.5) < 0.03);
  CHECK(d.cmf[4] == 1.0);
  CHECK(d.expected <= ek_upper_bound(ps, 128));
  CHECK(a.cache_size() > 0);
}

TEST_CASE("results do not depend on the worker count") {
  const std::vector<ChannelParams> ps(4, params(0.0112, 0.0165));
  ExactLimits one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = ExactAnalyzer(ps, 100, one).distribution();
  const auto b = ExactAnalyzer(ps, 100, many).distribution();
  CHECK(a.raw_cmf == b.raw_cmf);
  CHECK(a.expected == b.expected);
}

TEST_CASE("CSV output") {
  const std::vector<ChannelParams> ps(2, params(0.5, 0.5));
  std::ostringstream s;
  write_csv(s, k_distribution(2, ps));
  const auto text = s.str();
  CHECK(text.rfind("k,F_K,f_K\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
