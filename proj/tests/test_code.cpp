#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gadgetforge/code.hpp"
#include "gadgetforge/rng.hpp"

using namespace gforge;

namespace {

FqMat hamming74_generator(const FieldPtr& f2) {
  // Columns span the [7,4] Hamming code.
  const int rows[7][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                          {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}};
  FqMat g(f2, 7, 4);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 4; ++c) g.at(r, c) = rows[r][c];
  return g;
}

// Naive exhaustive minimum distance over all q^n messages; the independent
// oracle for everything min_distance reports.
u64 naive_min_distance(const LinearCode& c) {
  const FiniteField& F = *c.field();
  u64 best = ~u64{0};
  std::vector<u64> msg(c.dimension(), 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < msg.size() && msg[pos] + 1 == F.order()) {
      msg[pos] = 0;
      ++pos;
    }
    if (pos == msg.size()) break;
    ++msg[pos];
    best = std::min(best, hamming_weight(c.encode(msg)));
  }
  return best;
}

u64 naive_nearest(const LinearCode& c, const std::vector<u64>& t) {
  const FiniteField& F = *c.field();
  u64 best = hamming_weight(t);
  std::vector<u64> msg(c.dimension(), 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < msg.size() && msg[pos] + 1 == F.order()) {
      msg[pos] = 0;
      ++pos;
    }
    if (pos == msg.size()) break;
    ++msg[pos];
    std::vector<u64> w = c.encode(msg);
    u64 d = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != t[i]) ++d;
    best = std::min(best, d);
  }
  return best;
}

LinearCode random_code(const FieldPtr& f, std::size_t m, std::size_t n, Rng& rng) {
  for (;;) {
    FqMat g(f, m, n);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) g.at(r, c) = rng.uniform(f->order());
    if (fq_rank(g) == n) return LinearCode::from_generator(std::move(g));
  }
}

}  // namespace

TEST_CASE("parity checks annihilate the generator") {
  auto f2 = FiniteField::make(2, 1);

  // Full space: empty parity check.
  LinearCode full = LinearCode::full_space(f2, 4);
  CHECK(full.parity_check().rows() == 0);

  LinearCode ham = LinearCode::from_generator(hamming74_generator(f2));
  const FqMat& h = ham.parity_check();
  CHECK(h.rows() == 3);
  FqMat prod = h.mul(ham.generator());
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j) == 0);

  // Repetition length 3: parity check row-equivalent to [[1,1,0],[1,0,1]].
  LinearCode rep = LinearCode::repetition(f2, 3);
  const FqMat& hr = rep.parity_check();
  CHECK(hr.rows() == 2);
  FqMat expected(f2, 2, 3);
  expected.at(0, 0) = 1;
  expected.at(0, 1) = 1;
  expected.at(1, 0) = 1;
  expected.at(1, 2) = 1;
  // Same row space: stack and compare ranks.
  FqMat stacked(f2, 4, 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) {
      stacked.at(r, c) = hr.at(r, c);
      stacked.at(2 + r, c) = expected.at(r, c);
    }
  CHECK(fq_rank(stacked) == 2);
}

TEST_CASE("parity round trip preserves membership") {
  Rng rng(5);
  auto f3 = FiniteField::make(3, 1);
  LinearCode c = random_code(f3, 8, 4, rng);
  LinearCode back = LinearCode::from_parity(c.parity_check());
  for (int t = 0; t < 1000; ++t) {
    std::vector<u64> v(8);
    for (auto& x : v) x = rng.uniform(3);
    CHECK(c.contains(v) == back.contains(v));
  }
  CHECK_THROWS_AS(LinearCode::from_generator(FqMat(f3, 3, 2)), std::invalid_argument);
}

TEST_CASE("minimum distance oracles") {
  auto f2 = FiniteField::make(2, 1);
  for (std::size_t m : {3, 5, 8}) {
    auto rep = LinearCode::repetition(f2, m);
    CHECK(*min_distance(rep).distance == m);
  }
  LinearCode ham = LinearCode::from_generator(hamming74_generator(f2));
  CHECK(naive_min_distance(ham) == 3);
  CHECK(*min_distance(ham).distance == 3);
  CHECK(*min_distance(LinearCode::full_space(f2, 5)).distance == 1);
  CHECK_FALSE(min_distance(LinearCode::zero_code(f2, 5)).distance.has_value());

  // Both strategies agree where both run.
  auto f3 = FiniteField::make(3, 1);
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    LinearCode c = random_code(f3, 7, 3, rng);
    DistanceOptions msg_only;
    DistanceReport r1 = min_distance(c, msg_only);
    u64 naive = naive_min_distance(c);
    CHECK(*r1.distance == naive);
  }

  // Radius-capped search reports "beyond cap" honestly.
  DistanceOptions capped;
  capped.radius_cap = 2;
  CHECK_FALSE(min_distance(ham, capped).distance.has_value());
  capped.radius_cap = 3;
  CHECK(*min_distance(ham, capped).distance == 3);
}

TEST_CASE("nearest codeword distance") {
  auto f2 = FiniteField::make(2, 1);
  LinearCode ham = LinearCode::from_generator(hamming74_generator(f2));

  // A codeword is at distance zero.
  std::vector<u64> cw = ham.encode({1, 0, 1, 0});
  CHECK(*nearest_codeword_distance(ham, cw).distance == 0);

  // The all-ones target against the zero code measures its own weight.
  LinearCode zero = LinearCode::zero_code(f2, 6);
  std::vector<u64> ones(6, 1);
  CHECK(*nearest_codeword_distance(zero, ones).distance == 6);

  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    std::vector<u64> target(7);
    for (auto& x : target) x = rng.uniform(2);
    CHECK(*nearest_codeword_distance(ham, target).distance == naive_nearest(ham, target));
  }
}

TEST_CASE("tensor codes multiply distances") {
  auto f2 = FiniteField::make(2, 1);
  LinearCode rep2 = LinearCode::repetition(f2, 2);
  LinearCode t = tensor_codes(rep2, rep2);
  CHECK(t.block_length() == 4);
  CHECK(t.dimension() == 1);
  CHECK(*min_distance(t).distance == 4);

  LinearCode ham = LinearCode::from_generator(hamming74_generator(f2));
  LinearCode hh = tensor_codes(ham, ham);
  CHECK(hh.block_length() == 49);
  CHECK(hh.dimension() == 16);
  CHECK(*min_distance(hh).distance == 9);

  // Tensor with the one-dimensional full space leaves the distance alone.
  LinearCode one = LinearCode::full_space(f2, 1);
  CHECK(*min_distance(tensor_codes(ham, one)).distance == 3);

  // Multiplicativity on random pairs over F_2 and F_3.
  Rng rng(31);
  for (u64 q : {2ULL, 3ULL}) {
    auto f = FiniteField::make(q, 1);
    for (int trial = 0; trial < 5; ++trial) {
      LinearCode a = random_code(f, 4 + rng.uniform(2), 2, rng);
      LinearCode b = random_code(f, 4 + rng.uniform(2), 2, rng);
      u64 da = *min_distance(a).distance;
      u64 db = *min_distance(b).distance;
      CHECK(*min_distance(tensor_codes(a, b)).distance == da * db);
    }
  }

  auto f3 = FiniteField::make(3, 1);
  CHECK_THROWS_AS(tensor_codes(rep2, LinearCode::repetition(f3, 2)), std::invalid_argument);
}

TEST_CASE("code intersection is exact") {
  auto f2 = FiniteField::make(2, 1);
  LinearCode ham = LinearCode::from_generator(hamming74_generator(f2));

  LinearCode self = intersect_codes(ham, ham);
  LinearCode with_full = intersect_codes(ham, LinearCode::full_space(f2, 7));
  // Even-weight code on 7 bits.
  FqMat ev(f2, 1, 7);
  for (int i = 0; i < 7; ++i) ev.at(0, i) = 1;
  LinearCode even = LinearCode::from_parity(ev);
  LinearCode both = intersect_codes(ham, even);

  // Exhaustive membership equivalence over all of F_2^7.
  for (u64 v = 0; v < 128; ++v) {
    std::vector<u64> word(7);
    for (int i = 0; i < 7; ++i) word[i] = (v >> i) & 1;
    bool in_ham = ham.contains(word);
    CHECK(self.contains(word) == in_ham);
    CHECK(with_full.contains(word) == in_ham);
    CHECK(both.contains(word) == (in_ham && even.contains(word)));
  }

  // Intersections may collapse to the zero code; that is a value, not an error.
  FqMat e1(f2, 2, 1), e2(f2, 2, 1);
  e1.at(0, 0) = 1;
  e2.at(1, 0) = 1;
  LinearCode z = intersect_codes(LinearCode::from_generator(e1), LinearCode::from_generator(e2));
  CHECK(z.dimension() == 0);
}

TEST_CASE("Hamming ball enumeration") {
  auto f2 = FiniteField::make(2, 1);
  auto f3 = FiniteField::make(3, 1);

  HammingBall b0{f2, 4, 0};
  std::vector<std::vector<u64>> seen;
  enumerate_ball(b0, 1u << 20, [&](const std::vector<u64>& v) {
    seen.push_back(v);
    return true;
  });
  CHECK(seen.size() == 1);
  CHECK(hamming_weight(seen[0]) == 0);

  // q=2, m=3, r=1 in the documented order.
  HammingBall b1{f2, 3, 1};
  seen.clear();
  enumerate_ball(b1, 1u << 20, [&](const std::vector<u64>& v) {
    seen.push_back(v);
    return true;
  });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == std::vector<u64>{0, 0, 0});
  CHECK(seen[1] == std::vector<u64>{1, 0, 0});
  CHECK(seen[2] == std::vector<u64>{0, 1, 0});
  CHECK(seen[3] == std::vector<u64>{0, 0, 1});
  CHECK(b1.size() == 4);

  // q=3, m=4, r=2: closed form 1 + 4*2 + 6*4 = 33, no repeats.
  HammingBall b2{f3, 4, 2};
  CHECK(b2.size() == 33);
  std::set<std::vector<u64>> uniq;
  Int count = 0;
  enumerate_ball(b2, 1u << 20, [&](const std::vector<u64>& v) {
    uniq.insert(v);
    ++count;
    return true;
  });
  CHECK(count == 33);
  CHECK(uniq.size() == 33);

  // |B_{q,m}(r)| <= (qm)^r for r >= 1.
  for (u64 r = 1; r <= 4; ++r) {
    HammingBall b{f3, 6, r};
    CHECK(b.size() <= ipow(Int(3 * 6), r));
  }

  // Budget refusal.
  HammingBall big{f3, 30, 10};
  CHECK_THROWS_AS(enumerate_ball(big, 100, [](const std::vector<u64>&) { return true; }),
                  BudgetExceeded);
}
