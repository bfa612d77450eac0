#include "gadgetforge/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cfloat>

namespace gforge {

ZMat ZMat::transpose() const {
  ZMat out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
  return out;
}

ZMat ZMat::mul(const ZMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("ZMat::mul: size mismatch");
  ZMat out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& v = at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Int& w = o.at(k, j);
        if (w != 0) out.at(i, j) += v * w;
      }
    }
  return out;
}

std::vector<Int> ZMat::mul_vec(const std::vector<Int>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("ZMat::mul_vec: size mismatch");
  std::vector<Int> y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (a_[r * cols_ + c] != 0 && x[c] != 0) y[r] += a_[r * cols_ + c] * x[c];
  return y;
}

std::vector<Int> ZMat::column(std::size_t c) const {
  std::vector<Int> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// Row-style HNF of the lattice spanned by the rows of A. Pivot columns
// increase downward, pivots positive, entries above a pivot reduced into
// [0, pivot). Unique for a given row lattice.
ZMat row_hnf(ZMat a) {
  const std::size_t n = a.rows(), m = a.cols();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < n; ++col) {
    // Clear rows below `rank` in this column by gcd steps.
    for (;;) {
      std::size_t best = n;
      for (std::size_t i = rank; i < n; ++i) {
        if (a.at(i, col) == 0) continue;
        if (best == n || abs(a.at(i, col)) < abs(a.at(best, col))) best = i;
      }
      if (best == n) break;  // column all zero below rank
      if (best != rank) {
        for (std::size_t c = 0; c < m; ++c) std::swap(a.at(best, c), a.at(rank, c));
      }
      bool lower_nonzero = false;
      for (std::size_t i = rank + 1; i < n; ++i) {
        if (a.at(i, col) == 0) continue;
        Int q = a.at(i, col) / a.at(rank, col);  // truncated division shrinks
        if (q != 0) {
          for (std::size_t c = 0; c < m; ++c) a.at(i, c) -= q * a.at(rank, c);
        }
        if (a.at(i, col) != 0) lower_nonzero = true;
      }
      if (!lower_nonzero) break;
    }
    if (a.at(rank, col) == 0) continue;
    if (a.at(rank, col) < 0) {
      for (std::size_t c = 0; c < m; ++c) a.at(rank, c) = -a.at(rank, c);
    }
    for (std::size_t i = 0; i < rank; ++i) {
      Int q = floor_div(a.at(i, col), a.at(rank, col));
      if (q != 0) {
        for (std::size_t c = 0; c < m; ++c) a.at(i, c) -= q * a.at(rank, c);
      }
    }
    ++rank;
  }
  ZMat out(rank, m);
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t c = 0; c < m; ++c) out.at(r, c) = a.at(r, c);
  return out;
}

}  // namespace

ZMat hnf(const ZMat& b) { return row_hnf(b.transpose()).transpose(); }

Int integer_det(ZMat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("integer_det: not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m.at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

IntegerLattice IntegerLattice::from_basis(const ZMat& b) {
  return IntegerLattice(hnf(b));
}

IntegerLattice IntegerLattice::from_echelon_basis(ZMat b) {
  std::size_t prev = 0;
  bool first = true;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::size_t r = 0;
    while (r < b.rows() && b.at(r, c) == 0) ++r;
    if (r == b.rows() || b.at(r, c) <= 0 || (!first && r <= prev))
      throw std::invalid_argument("from_echelon_basis: not in echelon shape");
    prev = r;
    first = false;
  }
  return IntegerLattice(std::move(b));
}

namespace {
// Pivot row of each column of a column-HNF matrix.
std::vector<std::size_t> pivot_rows(const ZMat& b) {
  std::vector<std::size_t> piv(b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::size_t r = 0;
    while (r < b.rows() && b.at(r, c) == 0) ++r;
    piv[c] = r;
  }
  return piv;
}
}  // namespace

std::optional<std::vector<Int>> IntegerLattice::coefficients_of(const std::vector<Int>& v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("coefficients_of: dimension mismatch");
  std::vector<Int> residual = v;
  std::vector<Int> x(rank(), 0);
  auto piv = pivot_rows(basis_);
  for (std::size_t j = 0; j < rank(); ++j) {
    const std::size_t i = piv[j];
    // Rows above the pivot must already be cleared.
    if (residual[i] % basis_.at(i, j) != 0) return std::nullopt;
    x[j] = residual[i] / basis_.at(i, j);
    if (x[j] != 0) {
      for (std::size_t r = i; r < ambient_dim(); ++r) residual[r] -= x[j] * basis_.at(r, j);
    }
  }
  for (const Int& r : residual)
    if (r != 0) return std::nullopt;
  return x;
}

bool IntegerLattice::contains(const std::vector<Int>& v) const {
  return coefficients_of(v).has_value();
}

Int IntegerLattice::gram_det() const {
  ZMat g = basis_.transpose().mul(basis_);
  return integer_det(std::move(g));
}

Int IntegerLattice::det() const {
  if (rank() != ambient_dim()) throw std::logic_error("det: lattice not full rank");
  Int d = 1;
  for (std::size_t i = 0; i < rank(); ++i) d *= basis_.at(i, i);
  return d;
}

IntegerLattice construction_a(const LinearCode& c, u64 rho) {
  if (!is_prime_u64(rho)) throw std::invalid_argument("construction_a: modulus must be prime");
  const FiniteField& F = *c.field();
  if (!F.prime_field() || F.order() != rho)
    throw std::invalid_argument("construction_a: code must live over the prime field F_rho");
  const std::size_t m = c.block_length(), n = c.dimension();
  ZMat b(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t cidx = 0; cidx < n; ++cidx) b.at(r, cidx) = Int(c.generator().at(r, cidx));
    b.at(r, n + r) = Int(rho);
  }
  IntegerLattice lat = IntegerLattice::from_basis(b);
  lat.set_provenance(ModCodeProvenance{rho, c});
  return lat;
}

namespace {

std::vector<std::vector<Rat>> rat_inverse(const ZMat& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) throw std::invalid_argument("rat_inverse: not square");
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(b.at(i, j));
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::invalid_argument("rat_inverse: singular matrix");
    std::swap(a[piv], a[col]);
    Rat d = a[col][col];
    for (std::size_t j = col; j < 2 * n; ++j) a[col][j] /= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (std::size_t j = col; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

}  // namespace

IntegerLattice intersect_lattices(const IntegerLattice& a, const IntegerLattice& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("intersect_lattices: ambient dimension mismatch");
  const std::size_t m = a.ambient_dim();
  if (a.rank() != m || b.rank() != m)
    throw std::invalid_argument("intersect_lattices: inputs must be full rank");

  // Dual bases (columns): D = B^{-T}. Scale by s = det(A) det(B) to stay
  // integral, take the HNF of the stacked duals, and dualize back:
  // (L1 cap L2)* = L1* + L2*.
  auto ainv = rat_inverse(a.basis());
  auto binv = rat_inverse(b.basis());
  const Int s = a.det() * b.det();
  ZMat stacked(m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      // column j of A^{-T} is row j of A^{-1}
      Rat va = Rat(s) * ainv[j][i];
      Rat vb = Rat(s) * binv[j][i];
      if (denominator(va) != 1 || denominator(vb) != 1)
        throw std::logic_error("intersect_lattices: scaled dual not integral");
      stacked.at(i, j) = numerator(va);
      stacked.at(i, m + j) = numerator(vb);
    }
  ZMat h = hnf(stacked);
  if (h.cols() != m) throw std::logic_error("intersect_lattices: dual sum lost rank");
  // Result = s * H^{-T}.
  auto hinv = rat_inverse(h);
  ZMat result(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rat v = Rat(s) * hinv[j][i];
      if (denominator(v) != 1) throw std::logic_error("intersect_lattices: result not integral");
      result.at(i, j) = numerator(v);
    }
  return IntegerLattice::from_basis(result);
}

IntegerLattice tensor_lattices(const IntegerLattice& a, const IntegerLattice& b) {
  const ZMat& ba = a.basis();
  const ZMat& bb = b.basis();
  ZMat out(ba.rows() * bb.rows(), ba.cols() * bb.cols());
  for (std::size_t i = 0; i < ba.rows(); ++i)
    for (std::size_t j = 0; j < ba.cols(); ++j) {
      const Int& v = ba.at(i, j);
      if (v == 0) continue;
      for (std::size_t k = 0; k < bb.rows(); ++k)
        for (std::size_t l = 0; l < bb.cols(); ++l) {
          const Int& w = bb.at(k, l);
          if (w != 0) out.at(i * bb.rows() + k, j * bb.cols() + l) = v * w;
        }
    }
  // Kronecker products of column-HNF bases keep the echelon pivot layout;
  // only pivot-row reduction is lost, which nothing downstream relies on.
  return IntegerLattice::from_echelon_basis(std::move(out));
}

RatSolveResult rational_project(const ZMat& basis, const std::vector<Int>& t) {
  const std::size_t m = basis.rows(), r = basis.cols();
  if (t.size() != m) throw std::invalid_argument("rational_project: dimension mismatch");
  // Solve (B^T B) x = B^T t.
  ZMat gram = basis.transpose().mul(basis);
  std::vector<Rat> rhs(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    Int acc = 0;
    for (std::size_t k = 0; k < m; ++k) acc += basis.at(k, i) * t[k];
    rhs[i] = Rat(acc);
  }
  std::vector<std::vector<Rat>> a(r, std::vector<Rat>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) a[i][j] = Rat(gram.at(i, j));
  // Gaussian elimination (gram is positive definite, full column rank basis).
  std::vector<Rat> x = rhs;
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && a[piv][col] == 0) ++piv;
    if (piv == r) throw std::logic_error("rational_project: singular gram matrix");
    std::swap(a[piv], a[col]);
    std::swap(x[piv], x[col]);
    Rat d = a[col][col];
    for (std::size_t j = col; j < r; ++j) a[col][j] /= d;
    x[col] /= d;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (std::size_t j = col; j < r; ++j) a[i][j] -= f * a[col][j];
      x[i] -= f * x[col];
    }
  }
  RatSolveResult out;
  out.solution = x;
  Rat tt = 0;
  for (const Int& v : t) tt += Rat(v * v);
  Rat cross = 0;
  for (std::size_t i = 0; i < r; ++i) cross += x[i] * rhs[i];
  out.perp_norm_sq = tt - cross;
  return out;
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration with certified pruning.
// ---------------------------------------------------------------------------

namespace {

// Directed-rounding interval on doubles: lo <= true value <= hi. Every
// arithmetic result is widened by two ulps outward, which dominates the
// rounding error of the underlying IEEE operation.
struct DI {
  double lo, hi;

  static DI exact(double v) { return {v, v}; }
  static double down(double v) { return std::nextafter(std::nextafter(v, -DBL_MAX), -DBL_MAX); }
  static double up(double v) { return std::nextafter(std::nextafter(v, DBL_MAX), DBL_MAX); }

  DI operator+(const DI& o) const { return {down(lo + o.lo), up(hi + o.hi)}; }
  DI operator-(const DI& o) const { return {down(lo - o.hi), up(hi - o.lo)}; }
  DI operator*(const DI& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {down(std::min(std::min(a, b), std::min(c, d))),
            up(std::max(std::max(a, b), std::max(c, d)))};
  }
  DI divided_by(DI o) const {  // requires a positive denominator
    if (o.lo < 1e-300) o.lo = 1e-300;  // widening the denominator stays sound
    return {down(lo >= 0 ? lo / o.hi : lo / o.lo), up(hi >= 0 ? hi / o.lo : hi / o.hi)};
  }
  DI sqrt_nonneg() const {
    double l = lo < 0 ? 0 : lo;
    return {down(std::sqrt(l)), up(std::sqrt(hi < 0 ? 0 : hi))};
  }
};

DI rat_to_di(const Rat& r) {
  double d = static_cast<double>(r);
  return {DI::down(d), DI::up(d)};
}

// Upper rational bound on base^{num/den} for base >= 0.
Rat rat_pow_upper(const Rat& base, std::uint32_t num, std::uint32_t den) {
  if (base < 0) throw std::invalid_argument("rat_pow_upper: negative base");
  Rat pw = 1;
  for (std::uint32_t i = 0; i < num; ++i) pw *= base;
  if (den == 1) return pw;
  // Want u with u^den >= pw. Bracket the den-th root of pw from above; the
  // +2 covers both the radicand floor and the root floor.
  const unsigned s = 32;
  Int scaled_num = numerator(pw) * ipow(Int(1) << s, den);
  Int root = floor_nth_root(scaled_num / denominator(pw), den) + 2;
  return Rat(root, Int(1) << s);
}

struct GsProfile {
  std::size_t r = 0;
  std::vector<std::vector<Rat>> mu;  // mu[i][j], j < i
  std::vector<Rat> nsq;              // ||b_i*||^2
};

// Integral Gram-Schmidt via the d/lambda recurrences; exact.
GsProfile gram_schmidt(const ZMat& basis) {
  const std::size_t r = basis.cols();
  ZMat gram = basis.transpose().mul(basis);
  std::vector<Int> d(r + 1);
  d[0] = 1;
  std::vector<std::vector<Int>> lam(r, std::vector<Int>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Int u = gram.at(i, j);
      for (std::size_t k = 0; k < j; ++k) u = (d[k + 1] * u - lam[i][k] * lam[j][k]) / d[k];
      if (j < i)
        lam[i][j] = u;
      else
        d[i + 1] = u;
    }
    if (d[i + 1] <= 0) throw std::invalid_argument("gram_schmidt: basis not full column rank");
  }
  GsProfile gs;
  gs.r = r;
  gs.mu.assign(r, {});
  gs.nsq.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    gs.mu[i].assign(i, 0);
    for (std::size_t j = 0; j < i; ++j) gs.mu[i][j] = Rat(lam[i][j], d[j + 1]);
    gs.nsq[i] = Rat(d[i + 1], d[i]);
  }
  return gs;
}

}  // namespace

void enumerate_lattice_points(const IntegerLattice& lat, const std::vector<Int>* target,
                              const NormSpec& p, const Rat& radius_pow_p,
                              const EnumOptions& opt,
                              const std::function<bool(const EnumPoint&)>& visit) {
  const ZMat& basis = lat.basis();
  const std::size_t m = lat.ambient_dim(), r = lat.rank();
  if (radius_pow_p < 0) return;
  if (r == 0) {
    // Only the origin. Report it if it qualifies.
    std::vector<Int> w(m, 0);
    if (target) {
      for (std::size_t i = 0; i < m; ++i) w[i] = -(*target)[i];
    }
    PNormPow nrm = PNormPow::of_vector(w, p);
    if (nrm.compare(radius_pow_p) <= 0) {
      EnumPoint pt{{}, std::move(w), std::move(nrm)};
      visit(pt);
    }
    return;
  }

  // ell_2 ball radius^2 containing the ell_p ball of p-th-power radius
  // radius_pow_p: R2 = m^{max(0, 1-2/p)} * radius_pow_p^{2/p}, from the
  // support-counting norm inequalities.
  Rat r2 = rat_pow_upper(radius_pow_p, 2 * p.den, p.num);
  if (p.num > 2 * p.den) {
    // multiply by upper bound on m^{(p-2)/p} = m^{(num-2den)/num}
    r2 *= rat_pow_upper(Rat(m), p.num - 2 * p.den, p.num);
  }

  GsProfile gs = gram_schmidt(basis);

  // Target decomposition: z = rational coefficients of the span projection,
  // perp = squared distance to the span (always part of the true norm).
  std::vector<Rat> z(r, 0);
  Rat perp = 0;
  if (target) {
    RatSolveResult proj = rational_project(basis, *target);
    z = std::move(proj.solution);
    perp = proj.perp_norm_sq;
  }
  Rat r2span = r2 - perp;
  if (r2span < 0) return;

  // Interval versions for pruning.
  std::vector<std::vector<DI>> mu_di(r);
  std::vector<DI> nsq_di(r), z_di(r);
  for (std::size_t i = 0; i < r; ++i) {
    mu_di[i].resize(i);
    for (std::size_t j = 0; j < i; ++j) mu_di[i][j] = rat_to_di(gs.mu[i][j]);
    nsq_di[i] = rat_to_di(gs.nsq[i]);
    z_di[i] = rat_to_di(z[i]);
  }
  DI r2span_di = rat_to_di(r2span);

  // Decide whether incremental int64 accumulation of the vector is safe.
  bool use_i64 = true;
  {
    Int bound = 0;
    for (std::size_t i = 0; i < r; ++i) {
      double range = std::sqrt(std::max(0.0, r2span_di.hi / std::max(nsq_di[i].lo, 1e-300)));
      double zi = std::max(std::fabs(z_di[i].lo), std::fabs(z_di[i].hi));
      // generous per-coordinate coefficient bound; mu sums are bounded by the
      // enumeration itself, the slack only has to be an overestimate
      double xb = range * (1 + std::sqrt(static_cast<double>(r))) + zi + 4;
      if (xb > 1e15) {
        use_i64 = false;
        break;
      }
      Int colmax = 0;
      for (std::size_t row = 0; row < m; ++row) { Int av = abs(basis.at(row, i)); if (av > colmax) colmax = av; }
      bound += Int(static_cast<long long>(xb + 1)) * colmax;
    }
    if (target) {
      for (const Int& t : *target) bound += abs(t);
    }
    if (bound > (Int(1) << 61)) use_i64 = false;
  }

  std::uint64_t nodes = 0;
  const std::uint64_t max_nodes = opt.max_nodes;

  std::vector<long long> x(r, 0);
  std::vector<DI> u(r, DI::exact(0));              // x_i - z_i as intervals
  std::vector<std::vector<long long>> w64;
  std::vector<std::vector<long long>> basis64;
  if (use_i64) {
    w64.assign(r + 1, std::vector<long long>(m, 0));
    basis64.assign(r, std::vector<long long>(m, 0));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < m; ++i)
        basis64[j][i] = basis.at(i, j).convert_to<long long>();
    if (target) {
      for (std::size_t i = 0; i < m; ++i) w64[r][i] = -(*target)[i].convert_to<long long>();
    }
  }

  bool stop = false;

  // rem = remaining squared budget at this level (interval).
  std::function<void(std::size_t, DI)> descend = [&](std::size_t level_plus1, DI rem) {
    if (stop) return;
    if (++nodes > max_nodes) throw BudgetExceeded("enumerate_lattice_points: node budget exceeded");
    if (level_plus1 == 0) {
      // Leaf: exact verification.
      std::vector<Int> w(m, 0);
      if (use_i64) {
        for (std::size_t i = 0; i < m; ++i) w[i] = Int(w64[0][i]);
      } else {
        for (std::size_t j = 0; j < r; ++j) {
          if (x[j] == 0) continue;
          for (std::size_t i = 0; i < m; ++i) w[i] += Int(x[j]) * basis.at(i, j);
        }
        if (target) {
          for (std::size_t i = 0; i < m; ++i) w[i] -= (*target)[i];
        }
      }
      PNormPow nrm = PNormPow::of_vector(w, p);
      if (nrm.compare(radius_pow_p) <= 0) {
        EnumPoint pt;
        pt.coeffs.assign(x.begin(), x.end());
        pt.vector = std::move(w);
        pt.norm_pow = std::move(nrm);
        if (!visit(pt)) stop = true;
      }
      return;
    }
    const std::size_t i = level_plus1 - 1;
    // center c = z_i - sum_{j>i} mu[j][i] * u_j ; condition:
    // nsq_i (x_i - c)^2 <= rem
    DI c = z_di[i];
    for (std::size_t j = i + 1; j < r; ++j) c = c - mu_di[j][i] * u[j];
    DI halfwidth = rem.divided_by(nsq_di[i]).sqrt_nonneg();
    double lo_d = std::floor((c - halfwidth).lo);
    double hi_d = std::ceil((c + halfwidth).hi);
    if (hi_d < lo_d) return;
    if (lo_d < -9e15 || hi_d > 9e15)
      throw BudgetExceeded("enumerate_lattice_points: coordinate range overflow");
    long long lo = static_cast<long long>(lo_d), hi = static_cast<long long>(hi_d);
    for (long long xi = lo; xi <= hi && !stop; ++xi) {
      DI xd = DI::exact(static_cast<double>(xi));
      DI dev = xd - c;
      DI contrib = dev * dev * nsq_di[i];
      DI child = rem - contrib;
      if (child.hi < 0) continue;  // certified outside
      x[i] = xi;
      u[i] = xd - z_di[i];
      if (use_i64) {
        const std::vector<long long>& col = basis64[i];
        for (std::size_t row = 0; row < m; ++row)
          w64[i][row] = w64[i + 1][row] + xi * col[row];
      }
      descend(i, child);
    }
    x[i] = 0;
    u[i] = DI::exact(0) - z_di[i];
  };

  // Initialize u for levels above the top (none) and w partial at level r.
  for (std::size_t i = 0; i < r; ++i) u[i] = DI::exact(0) - z_di[i];
  descend(r, r2span_di);
}

// ---------------------------------------------------------------------------
// Oracles.
// ---------------------------------------------------------------------------

namespace {

// Closed-form coset search for Construction-A lattices: for each codeword,
// the minimal-norm lift is coordinatewise centered. Integral p only.
std::optional<Lambda1Report> lambda1_via_cosets(const IntegerLattice& lat, const NormSpec& p,
                                                const EnumOptions& opt) {
  if (!lat.provenance() || !p.is_integral()) return std::nullopt;
  const auto& prov = *lat.provenance();
  const LinearCode& c = prov.code;
  const u64 q = prov.rho;
  // q^n messages must fit the budget.
  double cost = 1;
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    cost *= static_cast<double>(q);
    if (cost > static_cast<double>(opt.max_nodes)) return std::nullopt;
  }
  const std::uint32_t pi = p.num;
  Lambda1Report rep;
  rep.strategy = LatticeStrategy::CodeCosets;
  Int best = ipow(Int(q), pi);  // the vector (q, 0, ..., 0)
  std::vector<Int> witness(c.block_length(), 0);
  witness[0] = Int(q);

  const std::size_t m = c.block_length();
  std::vector<u64> msg(c.dimension(), 0);
  std::vector<u64> word(m, 0);
  const FiniteField& F = *c.field();
  // Odometer over nonzero messages with incremental word updates.
  for (;;) {
    std::size_t pos = 0;
    while (pos < msg.size() && msg[pos] + 1 == q) {
      u64 delta = F.sub(0, q - 1);
      for (std::size_t r2 = 0; r2 < m; ++r2) {
        u64 col = c.generator().at(r2, pos);
        if (col) word[r2] = F.add(word[r2], F.mul(delta, col));
      }
      msg[pos] = 0;
      ++pos;
    }
    if (pos == msg.size()) break;
    for (std::size_t r2 = 0; r2 < m; ++r2) {
      u64 col = c.generator().at(r2, pos);
      if (col) word[r2] = F.add(word[r2], col);
    }
    ++msg[pos];
    ++rep.visited;
    Int acc = 0;
    for (std::size_t i = 0; i < m && acc < best; ++i) {
      u64 v = word[i];
      u64 lift = std::min<u64>(v, q - v);
      if (lift) acc += ipow(Int(lift), pi);
    }
    if (acc < best && acc > 0) {
      best = acc;
      for (std::size_t i = 0; i < m; ++i) {
        u64 v = word[i];
        witness[i] = (v <= q - v) ? Int(v) : -Int(q - v);
      }
    }
  }
  rep.value = PNormPow::from_rational(Rat(best), p);
  rep.witness = std::move(witness);
  return rep;
}

Rat norm_upper_rat(const PNormPow& n) {
  if (n.spec().is_integral()) return n.rational();
  // Rational upper bound by doubling; only the bound matters, not tightness.
  Rat hi = 1;
  while (n.compare(hi) > 0) hi *= 2;
  return hi;
}

}  // namespace

Lambda1Report lambda1(const IntegerLattice& lat, const NormSpec& p, const EnumOptions& opt) {
  if (lat.rank() == 0) {
    Lambda1Report rep;
    rep.value = PNormPow::infinity(p);
    return rep;
  }
  if (auto fast = lambda1_via_cosets(lat, p, opt)) return *fast;

  // Initial bound: best basis column.
  const ZMat& b = lat.basis();
  PNormPow best = PNormPow::of_vector(b.column(0), p);
  std::vector<Int> witness = b.column(0);
  for (std::size_t j = 1; j < b.cols(); ++j) {
    PNormPow n = PNormPow::of_vector(b.column(j), p);
    if (n.compare(best) < 0) {
      best = n;
      witness = b.column(j);
    }
  }
  Lambda1Report rep;
  std::uint64_t visited = 0;
  // Two-pass shrink: enumerate at the current best radius, updating the best
  // exact value; repeat from the smaller radius until no improvement. Each
  // pass is exhaustive for its radius, so the final value is the exact
  // minimum.
  for (;;) {
    bool improved = false;
    Rat radius = norm_upper_rat(best);
    enumerate_lattice_points(lat, nullptr, p, radius, opt, [&](const EnumPoint& pt) {
      ++visited;
      bool zero = true;
      for (const Int& v : pt.vector)
        if (v != 0) {
          zero = false;
          break;
        }
      if (zero) return true;
      if (pt.norm_pow.compare(best) < 0) {
        best = pt.norm_pow;
        witness = pt.vector;
        improved = true;
      }
      return true;
    });
    if (!improved) break;
  }
  rep.value = best;
  rep.witness = witness;
  rep.strategy = LatticeStrategy::FinckePohst;
  rep.visited = visited;
  return rep;
}

namespace {

std::optional<CvpReport> cvp_via_cosets(const IntegerLattice& lat, const std::vector<Int>& target,
                                        const NormSpec& p, const EnumOptions& opt) {
  if (!lat.provenance() || !p.is_integral()) return std::nullopt;
  const auto& prov = *lat.provenance();
  const LinearCode& c = prov.code;
  const u64 q = prov.rho;
  double cost = 1;
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    cost *= static_cast<double>(q);
    if (cost > static_cast<double>(opt.max_nodes)) return std::nullopt;
  }
  const std::uint32_t pi = p.num;
  const std::size_t m = c.block_length();
  // Residues of the target.
  std::vector<u64> tmod(m);
  for (std::size_t i = 0; i < m; ++i) {
    Int r2 = target[i] % Int(q);
    if (r2 < 0) r2 += q;
    tmod[i] = static_cast<u64>(r2);
  }
  const FiniteField& F = *c.field();

  CvpReport rep;
  rep.strategy = LatticeStrategy::CodeCosets;
  std::optional<Int> best;
  std::vector<u64> best_word;

  std::vector<u64> msg(c.dimension(), 0);
  std::vector<u64> word(m, 0);
  auto consider = [&](const std::vector<u64>& wrd) {
    ++rep.visited;
    Int acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      u64 d = (wrd[i] + q - tmod[i]) % q;
      u64 lift = std::min<u64>(d, q - d);
      if (lift) {
        acc += ipow(Int(lift), pi);
        if (best && acc >= *best) return;
      }
    }
    if (!best || acc < *best) {
      best = acc;
      best_word = wrd;
    }
  };
  consider(word);  // zero codeword
  for (;;) {
    std::size_t pos = 0;
    while (pos < msg.size() && msg[pos] + 1 == q) {
      u64 delta = F.sub(0, q - 1);
      for (std::size_t r2 = 0; r2 < m; ++r2) {
        u64 col = c.generator().at(r2, pos);
        if (col) word[r2] = F.add(word[r2], F.mul(delta, col));
      }
      msg[pos] = 0;
      ++pos;
    }
    if (pos == msg.size()) break;
    for (std::size_t r2 = 0; r2 < m; ++r2) {
      u64 col = c.generator().at(r2, pos);
      if (col) word[r2] = F.add(word[r2], col);
    }
    ++msg[pos];
    consider(word);
  }
  rep.distance_pow = PNormPow::from_rational(Rat(*best), p);
  // Reconstruct the closest vector from the best residue word.
  rep.closest.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    u64 d = (best_word[i] + q - tmod[i]) % q;
    Int delta = (d <= q - d) ? Int(d) : -Int(q - d);
    rep.closest[i] = target[i] + delta;
  }
  return rep;
}

}  // namespace

CvpReport cvp_distance(const IntegerLattice& lat, const std::vector<Int>& target,
                       const NormSpec& p, const EnumOptions& opt) {
  if (target.size() != lat.ambient_dim())
    throw std::invalid_argument("cvp_distance: dimension mismatch");
  if (auto fast = cvp_via_cosets(lat, target, p, opt)) return *fast;

  CvpReport rep;
  if (lat.rank() == 0) {
    rep.distance_pow = PNormPow::of_vector(target, p);
    rep.closest.assign(lat.ambient_dim(), 0);
    return rep;
  }
  // Babai-style initial bound: round the rational span coefficients.
  RatSolveResult proj = rational_project(lat.basis(), target);
  std::vector<Int> x0(lat.rank());
  for (std::size_t i = 0; i < lat.rank(); ++i) {
    Rat v = proj.solution[i] + Rat(1, 2);
    x0[i] = numerator(v) / denominator(v);  // floor for positive; fine as seed
  }
  std::vector<Int> w0 = lat.basis().mul_vec(x0);
  std::vector<Int> diff(target.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = w0[i] - target[i];
  PNormPow best = PNormPow::of_vector(diff, p);
  std::vector<Int> closest = w0;

  std::uint64_t visited = 0;
  for (;;) {
    bool improved = false;
    Rat radius = norm_upper_rat(best);
    enumerate_lattice_points(lat, &target, p, radius, opt, [&](const EnumPoint& pt) {
      ++visited;
      if (pt.norm_pow.compare(best) < 0) {
        best = pt.norm_pow;
        closest.assign(pt.vector.size(), 0);
        for (std::size_t i = 0; i < pt.vector.size(); ++i) closest[i] = pt.vector[i] + target[i];
        improved = true;
      }
      return true;
    });
    if (!improved) break;
  }
  rep.distance_pow = best;
  rep.closest = closest;
  rep.strategy = LatticeStrategy::FinckePohst;
  rep.visited = visited;
  return rep;
}

MultiplesReport cvp_all_multiples(const IntegerLattice& lat, const std::vector<Int>& target,
                                  const NormSpec& p, const Rat& threshold_pow_p,
                                  const EnumOptions& opt) {
  MultiplesReport rep;
  rep.min_distance_pow = PNormPow::infinity(p);

  RatSolveResult proj = rational_project(lat.basis(), target);
  if (proj.perp_norm_sq == 0) {
    // t lies in the rational span: D t is a lattice vector for D = lcm of
    // coefficient denominators, so alpha ranges over 1..D-1 (mod D).
    Int d = 1;
    for (const Rat& c : proj.solution) d = lcm(d, denominator(c));
    rep.exact_multiple = d;
    if (d > Int(4096)) throw BudgetExceeded("cvp_all_multiples: multiple period too large");
    Int bound = d - 1;
    rep.alpha_bound = bound;
    for (Int alpha = 1; alpha <= bound; ++alpha) {
      std::vector<Int> at(target.size());
      for (std::size_t i = 0; i < target.size(); ++i) at[i] = alpha * target[i];
      CvpReport c = cvp_distance(lat, at, p, opt);
      if (c.distance_pow.compare(rep.min_distance_pow) < 0) {
        rep.min_distance_pow = c.distance_pow;
        rep.witness_alpha = alpha;
      }
    }
    return rep;
  }

  // t has a component off the span: dist(L, alpha t) >= conv * |alpha| *
  // sqrt(perp), so only finitely many alpha can beat the threshold.
  // Qualification test, exact on 2b-th powers:
  //   p <= 2:  (alpha^2 perp)^a <= thr^{2b}
  //   p >  2:  (alpha^2 perp)^a <= thr^{2b} m^{a-2b}
  const std::uint32_t a = p.num, b = p.den;
  Rat thr2b = 1;
  for (std::uint32_t i = 0; i < 2 * b; ++i) thr2b *= threshold_pow_p;
  if (a > 2 * b) thr2b *= Rat(ipow(Int(lat.ambient_dim()), a - 2 * b));
  auto qualifies = [&](const Int& alpha) {
    Rat lhs = 1;
    Rat base = Rat(alpha * alpha) * proj.perp_norm_sq;
    for (std::uint32_t i = 0; i < a; ++i) lhs *= base;
    return lhs <= thr2b;
  };
  Int alpha = 1;
  while (qualifies(alpha)) {
    if (alpha > Int(4096)) throw BudgetExceeded("cvp_all_multiples: alpha range too large");
    std::vector<Int> at(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) at[i] = alpha * target[i];
    CvpReport c = cvp_distance(lat, at, p, opt);
    if (c.distance_pow.compare(rep.min_distance_pow) < 0) {
      rep.min_distance_pow = c.distance_pow;
      rep.witness_alpha = alpha;
    }
    ++alpha;
  }
  rep.alpha_bound = alpha - 1;
  return rep;
}

MinkowskiReport minkowski_check(const IntegerLattice& lat, const EnumOptions& opt) {
  MinkowskiReport rep;
  rep.rank = lat.rank();
  rep.gram_det = lat.gram_det();
  Lambda1Report l1 = lambda1(lat, NormSpec::integral(2), opt);
  rep.lambda1_sq = numerator(l1.value.rational());
  // det(L) >= (lambda_1/sqrt(r))^r  <=>  det^2 r^r >= (lambda_1^2)^r
  rep.holds = rep.gram_det * ipow(Int(lat.rank()), lat.rank()) >=
              ipow(rep.lambda1_sq, lat.rank());
  return rep;
}

void enumerate_sublattices(const IntegerLattice& lat, const Int& max_index,
                           const std::function<bool(const IntegerLattice&)>& visit) {
  const std::size_t r = lat.rank();
  // Canonical coefficient matrices: upper-triangular, positive diagonal,
  // row entries right of the diagonal reduced modulo the diagonal.
  ZMat t(r, r);
  bool stop = false;
  std::function<void(std::size_t, Int)> rec = [&](std::size_t i, Int det_so_far) {
    if (stop) return;
    if (i == r) {
      ZMat prod = lat.basis().mul(t);
      if (!visit(IntegerLattice::from_basis(prod))) stop = true;
      return;
    }
    for (Int d = 1; det_so_far * d <= max_index; ++d) {
      t.at(i, i) = d;
      // odometer over off-diagonal entries in row i: 0 <= t_ij < d
      std::vector<Int> off(r - i - 1, 0);
      for (;;) {
        for (std::size_t j = i + 1; j < r; ++j) t.at(i, j) = off[j - i - 1];
        rec(i + 1, det_so_far * d);
        if (stop) return;
        std::size_t pos = 0;
        while (pos < off.size() && off[pos] + 1 == d) {
          off[pos] = 0;
          ++pos;
        }
        if (pos == off.size()) break;
        ++off[pos];
      }
    }
    t.at(i, i) = 0;
    for (std::size_t j = i + 1; j < r; ++j) t.at(i, j) = 0;
  };
  rec(0, 1);
}

}  // namespace gforge
