#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gadgetforge/field.hpp"
#include "gadgetforge/rng.hpp"

using namespace gforge;

namespace {

// Test-side polynomial arithmetic over F_p, kept deliberately independent of
// the library path it checks.
std::vector<u64> naive_poly_mul(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  std::vector<u64> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return c;
}

bool naive_has_factorization(const std::vector<u64>& f, u64 p) {
  // Exhaustive product search over monic factor pairs.
  const std::size_t e = f.size() - 1;
  for (std::size_t d1 = 1; d1 < e; ++d1) {
    std::size_t d2 = e - d1;
    u64 count1 = 1;
    for (std::size_t i = 0; i < d1; ++i) count1 *= p;
    u64 count2 = 1;
    for (std::size_t i = 0; i < d2; ++i) count2 *= p;
    for (u64 v1 = 0; v1 < count1; ++v1) {
      std::vector<u64> g(d1 + 1, 0);
      u64 t = v1;
      for (std::size_t i = 0; i < d1; ++i) {
        g[i] = t % p;
        t /= p;
      }
      g[d1] = 1;
      for (u64 v2 = 0; v2 < count2; ++v2) {
        std::vector<u64> h(d2 + 1, 0);
        u64 s = v2;
        for (std::size_t i = 0; i < d2; ++i) {
          h[i] = s % p;
          s /= p;
        }
        h[d2] = 1;
        if (naive_poly_mul(g, h, p) == f) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("prime fields get modulus x") {
  auto f2 = FiniteField::make(2, 1);
  CHECK(f2->order() == 2);
  CHECK(f2->modulus() == std::vector<u64>{0, 1});
  auto f3 = FiniteField::make(3, 1);
  CHECK(f3->modulus() == std::vector<u64>{0, 1});
}

TEST_CASE("F_8 modulus is the smallest irreducible cubic") {
  auto f8 = FiniteField::make(2, 3);
  // Independent oracle: scan the 8 monic cubics over F_2 in little-endian
  // value order and take the first with no proper factorization.
  std::vector<u64> expected;
  for (u64 val = 0; val < 8; ++val) {
    std::vector<u64> cand = {val & 1, (val >> 1) & 1, (val >> 2) & 1, 1};
    if (!naive_has_factorization(cand, 2)) {
      expected = cand;
      break;
    }
  }
  CHECK(expected == std::vector<u64>{1, 1, 0, 1});  // x^3 + x + 1
  CHECK(f8->modulus() == expected);
}

TEST_CASE("make_field is deterministic and rejects bad input") {
  auto a = FiniteField::make(5, 2);
  auto b = FiniteField::make(5, 2);
  CHECK(a->modulus() == b->modulus());
  CHECK_THROWS_AS(FiniteField::make(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(FiniteField::make(6, 2), std::invalid_argument);
  CHECK_THROWS_AS(FiniteField::make(2, 0), std::invalid_argument);
}

TEST_CASE("primitive elements") {
  auto f2 = FiniteField::make(2, 1);
  CHECK(f2->primitive_element() == 1);

  auto f7 = FiniteField::make(7, 1);
  // Brute-force order computation over all of F_7*.
  u64 expected = 0;
  for (u64 a = 2; a < 7 && expected == 0; ++a) {
    u64 ord = 1, x = a;
    while (x != 1) {
      x = (x * a) % 7;
      ++ord;
    }
    if (ord == 6) expected = a;
  }
  CHECK(expected == 3);
  CHECK(f7->primitive_element() == 3);

  auto f8 = FiniteField::make(2, 3);
  // x has value 2 in the base-2 coefficient encoding; its order is 7.
  u64 x = 2, pw = x, ord = 1;
  while (pw != 1) {
    pw = f8->mul(pw, x);
    ++ord;
  }
  CHECK(ord == 7);
  CHECK(f8->primitive_element() == 2);
}

TEST_CASE("basic arithmetic identities") {
  auto f3 = FiniteField::make(3, 1);
  CHECK(f3->add(2, 2) == 1);

  auto f8 = FiniteField::make(2, 3);
  // x * x * x reduces to x + 1 by the modulus; coefficients (1,1,0) = value 3.
  u64 xxx = f8->mul(f8->mul(2, 2), 2);
  CHECK(xxx == f8->from_coeffs({1, 1, 0}));
  CHECK(xxx == 3);

  Rng rng(123);
  for (const auto& [p, e] : std::vector<std::pair<u64, unsigned>>{{2, 4}, {3, 2}, {5, 1}, {7, 2}}) {
    auto f = FiniteField::make(p, e);
    for (int i = 0; i < 100; ++i) {
      u64 a = 1 + rng.uniform(f->order() - 1);
      CHECK(f->mul(a, f->inv(a)) == 1);
    }
  }
  CHECK_THROWS_AS(FiniteField::make(2, 2)->inv(0), std::domain_error);
}

TEST_CASE("Fermat/Lagrange: a^(q-1) = 1") {
  Rng rng(99);
  for (const auto& [p, e] : std::vector<std::pair<u64, unsigned>>{
           {2, 8}, {3, 4}, {5, 3}, {2, 16}, {251, 1}}) {
    auto f = FiniteField::make(p, e);
    for (int i = 0; i < 25; ++i) {
      u64 a = 1 + rng.uniform(f->order() - 1);
      CHECK(f->pow(a, f->order() - 1) == 1);
    }
  }
}

TEST_CASE("Frobenius is additive") {
  Rng rng(7);
  for (const auto& [p, e] : std::vector<std::pair<u64, unsigned>>{{2, 6}, {3, 3}, {5, 2}}) {
    auto f = FiniteField::make(p, e);
    for (int i = 0; i < 50; ++i) {
      u64 a = rng.uniform(f->order());
      u64 b = rng.uniform(f->order());
      CHECK(f->pow(f->add(a, b), p) == f->add(f->pow(a, p), f->pow(b, p)));
    }
  }
}

TEST_CASE("field element wrapper enforces matching fields") {
  auto f4 = FiniteField::make(2, 2);
  auto f8 = FiniteField::make(2, 3);
  FieldElement a(f4, 2), b(f4, 3);
  CHECK((a * b).value() == f4->mul(2, 3));
  FieldElement c(f8, 2);
  CHECK_THROWS_AS(a + c, std::invalid_argument);
}

TEST_CASE("subfield embedding is a field homomorphism") {
  auto f4 = FiniteField::make(2, 2);
  auto f16 = FiniteField::make(2, 4);
  auto emb = SubfieldEmbedding::compute(f4, f16);
  for (u64 a = 0; a < 4; ++a)
    for (u64 b = 0; b < 4; ++b) {
      CHECK(emb.embed(f4->add(a, b)) == f16->add(emb.embed(a), emb.embed(b)));
      CHECK(emb.embed(f4->mul(a, b)) == f16->mul(emb.embed(a), emb.embed(b)));
    }
  CHECK(emb.embed(0) == 0);
  CHECK(emb.embed(1) == 1);
  CHECK(emb.embed(2) != emb.embed(3));
}

TEST_CASE("primality and prime-power decomposition") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(13));
  CHECK(is_prime_u64(2147483647ULL));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(561));  // Carmichael
  CHECK(next_prime_u64(24) == 29);
  auto pp = prime_power_decompose(243);
  REQUIRE(pp.has_value());
  CHECK(pp->first == 3);
  CHECK(pp->second == 5);
  CHECK_FALSE(prime_power_decompose(12).has_value());
}

TEST_CASE("q must fit in 64 bits") {
  CHECK_THROWS_AS(FiniteField::make(2, 65), std::invalid_argument);
  CHECK_NOTHROW(FiniteField::make(2, 20));
}
