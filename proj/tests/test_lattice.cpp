#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gadgetforge/gadgets.hpp"
#include "gadgetforge/lattice.hpp"
#include "gadgetforge/rng.hpp"

using namespace gforge;

namespace {

ZMat mat(std::size_t rows, std::size_t cols, std::vector<long long> vals) {
  ZMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = vals[r * cols + c];
  return m;
}

// Test-side 2x2/3x3 membership via Cramer's rule, independent of the HNF
// substitution the library uses.
bool cramer_member(const ZMat& b, const std::vector<Int>& v) {
  REQUIRE(b.rows() == b.cols());
  const std::size_t n = b.rows();
  ZMat full = b;
  Int det = integer_det(full);
  REQUIRE(det != 0);
  for (std::size_t j = 0; j < n; ++j) {
    ZMat rep = b;
    for (std::size_t i = 0; i < n; ++i) rep.at(i, j) = v[i];
    if (integer_det(rep) % det != 0) return false;
  }
  return true;
}

// Exhaustive search over a vector box with Cramer-rule membership: the
// independent oracle for lambda1 and cvp. Sound whenever the certified
// minimum keeps the argmin inside the box (|w_i| <= box coordinatewise),
// which the callers assert via the returned value.
Int naive_lambda1_pow(const ZMat& b, std::uint32_t p, long long box = 8) {
  std::optional<Int> best;
  std::vector<Int> w(3);
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y)
      for (long long z = -box; z <= box; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        w[0] = x; w[1] = y; w[2] = z;
        if (!cramer_member(b, w)) continue;
        Int acc = ipow(Int(std::abs(x)), p) + ipow(Int(std::abs(y)), p) + ipow(Int(std::abs(z)), p);
        if (!best || acc < *best) best = acc;
      }
  return *best;
}

Int naive_cvp_pow(const ZMat& b, const std::vector<Int>& t, std::uint32_t p, long long box = 8) {
  std::optional<Int> best;
  std::vector<Int> w(3);
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y)
      for (long long z = -box; z <= box; ++z) {
        w[0] = t[0] + x; w[1] = t[1] + y; w[2] = t[2] + z;
        if (!cramer_member(b, w)) continue;
        Int acc = ipow(Int(std::abs(x)), p) + ipow(Int(std::abs(y)), p) + ipow(Int(std::abs(z)), p);
        if (!best || acc < *best) best = acc;
      }
  return *best;
}

ZMat random_unimodular(std::size_t n, Rng& rng) {
  ZMat u(n, n);
  for (std::size_t i = 0; i < n; ++i) u.at(i, i) = 1;
  for (int step = 0; step < 12; ++step) {
    std::size_t i = rng.uniform(n), j = rng.uniform(n);
    if (i == j) continue;
    long long f = static_cast<long long>(rng.uniform(5)) - 2;
    for (std::size_t k = 0; k < n; ++k) u.at(k, j) += Int(f) * u.at(k, i);
  }
  return u;
}

ZMat random_full_rank(std::size_t n, long long lim, Rng& rng) {
  for (;;) {
    ZMat b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        b.at(i, j) = static_cast<long long>(rng.uniform(2 * lim + 1)) - lim;
    if (integer_det(b) != 0) return b;
  }
}

}  // namespace

TEST_CASE("hnf basics") {
  ZMat id = mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(hnf(id) == id);

  // [[2,1],[0,1]] columns: same lattice, membership-equivalent on a box.
  ZMat b = mat(2, 2, {2, 1, 0, 1});
  IntegerLattice lat = IntegerLattice::from_basis(b);
  for (long long x = -5; x <= 5; ++x)
    for (long long y = -5; y <= 5; ++y) {
      std::vector<Int> v = {Int(x), Int(y)};
      CHECK(lat.contains(v) == cramer_member(b, v));
    }

  // Unimodular invariance.
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    ZMat base = random_full_rank(3, 4, rng);
    ZMat u = random_unimodular(3, rng);
    CHECK(hnf(base) == hnf(base.mul(u)));
  }

  // Rank-deficient input drops dependent columns.
  ZMat dep = mat(2, 3, {1, 2, 3, 1, 2, 3});
  CHECK(hnf(dep).cols() == 1);
}

TEST_CASE("determinants") {
  CHECK(integer_det(mat(2, 2, {3, 1, 4, 2})) == 2);
  CHECK(integer_det(mat(3, 3, {2, 0, 0, 0, 3, 0, 0, 0, 5})) == 30);
  CHECK(integer_det(mat(2, 2, {1, 2, 2, 4})) == 0);
  IntegerLattice l = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 3}));
  CHECK(l.det() == 6);
  CHECK(l.gram_det() == 36);
}

TEST_CASE("construction A") {
  auto f2 = FiniteField::make(2, 1);
  auto f3 = FiniteField::make(3, 1);

  // Full space lifts to Z^m.
  IntegerLattice zfull = construction_a(LinearCode::full_space(f3, 3), 3);
  CHECK(zfull.det() == 1);

  // Zero code lifts to rho Z^m with determinant rho^m.
  IntegerLattice z3 = construction_a(LinearCode::zero_code(f3, 2), 3);
  CHECK(z3.det() == 9);
  CHECK(z3.contains({Int(3), Int(0)}));
  CHECK_FALSE(z3.contains({Int(1), Int(0)}));

  // Repetition code of length 3 over F_2: determinant 4, lambda_1^(1) = 2.
  IntegerLattice rep = construction_a(LinearCode::repetition(f2, 3), 2);
  CHECK(rep.det() == 4);
  CHECK(rep.contains({Int(1), Int(1), Int(1)}));
  CHECK(rep.contains({Int(2), Int(0), Int(0)}));
  CHECK_FALSE(rep.contains({Int(1), Int(1), Int(0)}));
  Lambda1Report l1 = lambda1(rep, NormSpec::integral(1));
  CHECK(l1.value.rational() == 2);

  // Determinant formula rho^{m-n} across a few random codes.
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    FqMat g(f3, 4, 2);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) g.at(i, j) = rng.uniform(3);
    if (fq_rank(g) != 2) continue;
    IntegerLattice lat = construction_a(LinearCode::from_generator(g), 3);
    CHECK(lat.det() == 9);  // 3^{4-2}
  }

  CHECK_THROWS_AS(construction_a(LinearCode::full_space(f2, 2), 4), std::invalid_argument);
  auto f4 = FiniteField::make(2, 2);
  CHECK_THROWS_AS(construction_a(LinearCode::full_space(f4, 2), 2), std::invalid_argument);
}

TEST_CASE("lattice intersection") {
  IntegerLattice l = IntegerLattice::from_basis(mat(2, 2, {2, 1, 0, 3}));
  IntegerLattice self = intersect_lattices(l, l);
  CHECK(self.basis() == l.basis());

  IntegerLattice two = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 2}));
  IntegerLattice three = IntegerLattice::from_basis(mat(2, 2, {3, 0, 0, 3}));
  IntegerLattice six = intersect_lattices(two, three);
  CHECK(six.det() == 36);
  CHECK(six.contains({Int(6), Int(0)}));
  CHECK_FALSE(six.contains({Int(2), Int(0)}));
  CHECK_FALSE(six.contains({Int(3), Int(3)}));

  // Membership equivalence on an exhaustive box for random full-rank pairs.
  Rng rng(29);
  for (int t = 0; t < 6; ++t) {
    ZMat a = random_full_rank(3, 3, rng);
    ZMat b = random_full_rank(3, 3, rng);
    IntegerLattice la = IntegerLattice::from_basis(a);
    IntegerLattice lb = IntegerLattice::from_basis(b);
    IntegerLattice meet = intersect_lattices(la, lb);
    for (long long x = -6; x <= 6; ++x)
      for (long long y = -6; y <= 6; ++y)
        for (long long z = -6; z <= 6; ++z) {
          std::vector<Int> v = {Int(x), Int(y), Int(z)};
          CHECK(meet.contains(v) == (la.contains(v) && lb.contains(v)));
        }
  }

  IntegerLattice rect = IntegerLattice::from_basis(mat(3, 2, {1, 0, 0, 1, 0, 0}));
  CHECK_THROWS_AS(intersect_lattices(rect, rect), std::invalid_argument);
}

TEST_CASE("lambda1 oracle") {
  for (std::uint32_t p : {1u, 2u, 3u}) {
    IntegerLattice z3 = IntegerLattice::from_basis(mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    CHECK(lambda1(z3, NormSpec::integral(p)).value.rational() == 1);
    IntegerLattice two = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 2}));
    CHECK(lambda1(two, NormSpec::integral(p)).value.rational() == ipow(Int(2), p));
  }
  // Fractional p on 2Z^2: lambda_1 = 2, so the p-th power is 2^{3/2} = sqrt(8).
  IntegerLattice two = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 2}));
  Lambda1Report frac = lambda1(two, NormSpec(3, 2));
  RootSum expect(2);
  expect.add_root(Int(8));
  CHECK(frac.value.compare(Rat(28284, 10000)) > 0);
  CHECK(frac.value.compare(Rat(28285, 10000)) < 0);

  // Trivial rank-0 lattice: lambda is the +infinity sentinel.
  IntegerLattice empty = IntegerLattice::from_basis(ZMat(3, 0));
  CHECK(lambda1(empty, NormSpec::integral(2)).value.is_infinite());

  // Random lattices against the box oracle, all integral p.
  Rng rng(41);
  for (int t = 0; t < 12; ++t) {
    ZMat b = random_full_rank(3, 3, rng);
    IntegerLattice lat = IntegerLattice::from_basis(b);
    for (std::uint32_t p : {1u, 2u, 3u}) {
      Lambda1Report rep = lambda1(lat, NormSpec::integral(p));
      // The witness achieves the reported value and lies in the lattice.
      CHECK(lat.contains(rep.witness));
      CHECK(PNormPow::of_vector(rep.witness, NormSpec::integral(p)).compare(rep.value) == 0);
      Int lib = numerator(rep.value.rational());
      if (lib <= ipow(Int(8), p)) CHECK(lib == naive_lambda1_pow(b, p));
    }
  }

  // The Construction-A coset route agrees with Fincke-Pohst.
  IntegerLattice rs = build_rs_lattice(5, 2);
  Lambda1Report coset = lambda1(rs, NormSpec::integral(2));
  CHECK(coset.strategy == LatticeStrategy::CodeCosets);
  IntegerLattice stripped = IntegerLattice::from_basis(rs.basis());
  Lambda1Report fp = lambda1(stripped, NormSpec::integral(2));
  CHECK(fp.strategy == LatticeStrategy::FinckePohst);
  CHECK(coset.value.compare(fp.value) == 0);
  CHECK(coset.value.rational() == 5);  // the all-ones codeword lift
}

TEST_CASE("cvp oracle") {
  IntegerLattice two = IntegerLattice::from_basis(mat(1, 1, {2}));
  CHECK(cvp_distance(two, {Int(1)}, NormSpec::integral(2)).distance_pow.rational() == 1);
  CHECK(cvp_distance(two, {Int(4)}, NormSpec::integral(2)).distance_pow.rational() == 0);

  Rng rng(47);
  for (int t = 0; t < 10; ++t) {
    ZMat b = random_full_rank(3, 4, rng);
    IntegerLattice lat = IntegerLattice::from_basis(b);
    std::vector<Int> target(3);
    for (auto& x : target) x = static_cast<long long>(rng.uniform(9)) - 4;
    for (std::uint32_t p : {1u, 2u}) {
      CvpReport rep = cvp_distance(lat, target, NormSpec::integral(p));
      Int lib = numerator(rep.distance_pow.rational());
      // Witness check: reported value is achieved inside the lattice.
      CHECK(lat.contains(rep.closest));
      std::vector<Int> diff(3);
      for (int i = 0; i < 3; ++i) diff[i] = rep.closest[i] - target[i];
      CHECK(PNormPow::of_vector(diff, NormSpec::integral(p)).rational() == Rat(lib));
      // Box-oracle agreement whenever the argmin provably fits the box.
      if (lib <= ipow(Int(8), p)) CHECK(lib == naive_cvp_pow(b, target, p));
    }
  }
}

TEST_CASE("cvp over all nonzero multiples of the target") {
  // Rank-deficient lattice, target off the span: finitely many alpha.
  ZMat b = mat(3, 2, {1, 0, 0, 1, 0, 0});
  IntegerLattice lat = IntegerLattice::from_basis(b);
  std::vector<Int> t = {Int(0), Int(0), Int(5)};
  // threshold^p = 9 < 25 = dist^2 at alpha = 1: the perpendicular component
  // certifies that no alpha can reach the threshold, so nothing is searched.
  MultiplesReport tight = cvp_all_multiples(lat, t, NormSpec::integral(2), Rat(9));
  CHECK_FALSE(tight.exact_multiple.has_value());
  CHECK(tight.alpha_bound == 0);
  CHECK(tight.min_distance_pow.is_infinite());
  // A looser threshold admits alpha = 1 only.
  MultiplesReport rep = cvp_all_multiples(lat, t, NormSpec::integral(2), Rat(30));
  CHECK_FALSE(rep.exact_multiple.has_value());
  CHECK(rep.alpha_bound == 1);
  CHECK(rep.min_distance_pow.rational() == 25);

  // Target in the rational span: a multiple lands in the lattice.
  IntegerLattice two = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 2}));
  std::vector<Int> t2 = {Int(1), Int(1)};
  MultiplesReport rep2 = cvp_all_multiples(two, t2, NormSpec::integral(2), Rat(100));
  REQUIRE(rep2.exact_multiple.has_value());
  CHECK(*rep2.exact_multiple == 2);
  CHECK(rep2.min_distance_pow.rational() == 2);  // alpha = 1: dist^2((1,1), 2Z^2) = 2
}

TEST_CASE("tensor lattices") {
  IntegerLattice za = IntegerLattice::from_basis(mat(2, 2, {1, 0, 0, 1}));
  IntegerLattice zb = IntegerLattice::from_basis(mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  IntegerLattice t = tensor_lattices(za, zb);
  CHECK(t.ambient_dim() == 6);
  CHECK(t.rank() == 6);
  CHECK(lambda1(t, NormSpec::integral(2)).value.rational() == 1);

  IntegerLattice two = IntegerLattice::from_basis(mat(1, 1, {2}));
  IntegerLattice three = IntegerLattice::from_basis(mat(1, 1, {3}));
  IntegerLattice six = tensor_lattices(two, three);
  CHECK(six.basis().at(0, 0) == 6);

  // lambda_1(L tensor L) <= lambda_1(L)^2, exactly assertable.
  Rng rng(53);
  for (int trial = 0; trial < 6; ++trial) {
    ZMat b = random_full_rank(2, 3, rng);
    IntegerLattice lat = IntegerLattice::from_basis(b);
    IntegerLattice tt = tensor_lattices(lat, lat);
    Int l1 = numerator(lambda1(lat, NormSpec::integral(2)).value.rational());
    Int l1t = numerator(lambda1(tt, NormSpec::integral(2)).value.rational());
    CHECK(l1t <= l1 * l1);
  }
}

TEST_CASE("minkowski bound") {
  IntegerLattice z4 = IntegerLattice::from_basis(mat(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
  MinkowskiReport r1 = minkowski_check(z4);
  CHECK(r1.holds);

  IntegerLattice two = IntegerLattice::from_basis(mat(2, 2, {2, 0, 0, 2}));
  MinkowskiReport r2 = minkowski_check(two);
  CHECK(r2.holds);
  CHECK(r2.gram_det == 16);
  CHECK(r2.lambda1_sq == 4);

  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    ZMat b = random_full_rank(3, 4, rng);
    CHECK(minkowski_check(IntegerLattice::from_basis(b)).holds);
  }
}

TEST_CASE("enumeration is exhaustive against a box oracle") {
  Rng rng(67);
  for (int t = 0; t < 8; ++t) {
    ZMat b = random_full_rank(3, 3, rng);
    IntegerLattice lat = IntegerLattice::from_basis(b);
    const Rat radius = 16;  // ell_2 squared radius
    std::set<std::vector<long long>> found;
    enumerate_lattice_points(lat, nullptr, NormSpec::integral(2), radius, {},
                             [&](const EnumPoint& pt) {
                               std::vector<long long> key;
                               for (const Int& v : pt.vector) key.push_back(v.convert_to<long long>());
                               found.insert(key);
                               return true;
                             });
    // Box oracle: every lattice vector with norm^2 <= 16 from coefficients in
    // a generous box must have been visited.
    for (long long x = -8; x <= 8; ++x)
      for (long long y = -8; y <= 8; ++y)
        for (long long z = -8; z <= 8; ++z) {
          Int n2 = 0;
          std::vector<long long> w(3, 0);
          for (std::size_t i = 0; i < 3; ++i) {
            Int acc = b.at(i, 0) * x + b.at(i, 1) * y + b.at(i, 2) * z;
            w[i] = acc.convert_to<long long>();
            n2 += acc * acc;
          }
          if (n2 <= 16) CHECK(found.count(w) == 1);
        }
  }
}

TEST_CASE("sublattice enumeration visits each index class once") {
  IntegerLattice z2 = IntegerLattice::from_basis(mat(2, 2, {1, 0, 0, 1}));
  std::set<std::string> seen;
  Int count = 0;
  enumerate_sublattices(z2, Int(4), [&](const IntegerLattice& sub) {
    std::string key;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) key += sub.basis().at(i, j).str() + ",";
    seen.insert(key);
    ++count;
    return true;
  });
  // Sublattices of Z^2 of index n: sigma(n); totals for n = 1..4: 1+3+4+7.
  CHECK(count == 15);
  CHECK(Int(seen.size()) == count);
}
