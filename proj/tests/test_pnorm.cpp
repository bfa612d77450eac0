#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gadgetforge/pnorm.hpp"
#include "gadgetforge/rng.hpp"

using namespace gforge;

TEST_CASE("integer roots") {
  CHECK(floor_nth_root(Int(0), 2) == 0);
  CHECK(floor_nth_root(Int(35), 2) == 5);
  CHECK(floor_nth_root(Int(36), 2) == 6);
  CHECK(floor_nth_root(Int(1000000), 3) == 100);
  CHECK(floor_nth_root(Int("123456789123456789123456789"), 5) == Int("165311"));
  Int root;
  CHECK(is_perfect_nth_power(Int(1024), 5, &root));
  CHECK(root == 4);
  CHECK_FALSE(is_perfect_nth_power(Int(1025), 5));
}

TEST_CASE("NormSpec validation") {
  CHECK(NormSpec(3, 2).value() == Rat(3, 2));
  CHECK(NormSpec(4, 2).is_integral());  // reduces to 2
  CHECK_THROWS_AS(NormSpec(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec(1, 0), std::invalid_argument);
}

TEST_CASE("RootSum canonicalization and comparison") {
  RootSum a(2);
  a.add_root(Int(2));  // sqrt(2)
  CHECK(a.compare(Rat(141421356, 100000000)) > 0);
  CHECK(a.compare(Rat(141421357, 100000000)) < 0);

  // sqrt(2) + sqrt(8) = 3 sqrt(2) = sqrt(18): canonical forms coincide.
  RootSum lhs(2);
  lhs.add_root(Int(2));
  lhs.add_root(Int(8));
  RootSum rhs(2);
  rhs.add_root(Int(18));
  CHECK(lhs == rhs);
  CHECK(lhs.compare(rhs) == 0);

  // Perfect powers collapse to the rational part: sqrt(49) = 7.
  RootSum c(2);
  c.add_root(Int(49));
  CHECK(c.is_rational());
  CHECK(c.rational_part() == 7);
}

TEST_CASE("PNormPow carries exact ell_p^p values") {
  std::vector<Int> v = {Int(1), Int(-2), Int(2), Int(0)};
  PNormPow n2 = PNormPow::of_vector(v, NormSpec::integral(2));
  CHECK(n2.rational() == 9);
  PNormPow n1 = PNormPow::of_vector(v, NormSpec::integral(1));
  CHECK(n1.rational() == 5);

  // p = 3/2: 1 + 2 * 2^{3/2} = 1 + sqrt(32) ~ 6.65685
  PNormPow nh = PNormPow::of_vector(v, NormSpec(3, 2));
  CHECK(nh.compare(Rat(66568, 10000)) > 0);
  CHECK(nh.compare(Rat(66569, 10000)) < 0);
  double expect = 1 + 2 * std::pow(2.0, 1.5);
  CHECK(nh.compare(Rat(static_cast<long long>(expect * 1e6) + 3, 1000000)) < 0);
  CHECK(nh.compare(Rat(static_cast<long long>(expect * 1e6) - 3, 1000000)) > 0);

  PNormPow inf = PNormPow::infinity(NormSpec::integral(2));
  CHECK(inf.is_infinite());
  CHECK(inf.compare(Rat(1000000)) > 0);
}

TEST_CASE("norm inequalities hold on random integer vectors") {
  Rng rng(2024);
  const std::vector<NormSpec> ps = {NormSpec::integral(1), NormSpec(3, 2), NormSpec::integral(2),
                                    NormSpec::integral(3)};
  for (int trial = 0; trial < 250; ++trial) {
    std::size_t dim = 1 + rng.uniform(7);
    std::vector<Int> v(dim);
    for (auto& x : v) {
      long long val = static_cast<long long>(rng.uniform(41)) - 20;
      x = val;
    }
    for (const auto& p : ps) CHECK(check_norm_inequalities(v, p));
  }
  // Degenerate shapes: zero vector, single spike, uniform vector.
  for (const auto& p : ps) {
    CHECK(check_norm_inequalities({Int(0), Int(0)}, p));
    CHECK(check_norm_inequalities({Int(0), Int(-7), Int(0)}, p));
    CHECK(check_norm_inequalities({Int(3), Int(-3), Int(3), Int(3)}, p));
  }
}
