#include "gadgetforge/code.hpp"

#include <algorithm>

namespace gforge {

std::vector<u64> FqMat::mul_vec(const std::vector<u64>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("mul_vec: size mismatch");
  const FiniteField& F = *field_;
  std::vector<u64> y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    u64 acc = 0;
    const u64* row = a_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (row[c] != 0 && x[c] != 0) acc = F.add(acc, F.mul(row[c], x[c]));
    }
    y[r] = acc;
  }
  return y;
}

FqMat FqMat::mul(const FqMat& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix product: size mismatch");
  const FiniteField& F = *field_;
  FqMat out(field_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      u64 v = at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        u64 w = other.at(k, j);
        if (w != 0) out.at(i, j) = F.add(out.at(i, j), F.mul(v, w));
      }
    }
  }
  return out;
}

FqMat FqMat::transpose() const {
  FqMat out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
  return out;
}

std::size_t fq_row_reduce(FqMat& m, bool reduced) {
  const FiniteField& F = *m.field();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(rank, c));
    }
    u64 inv = F.inv(m.at(rank, col));
    for (std::size_t c = col; c < m.cols(); ++c) m.at(rank, c) = F.mul(m.at(rank, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank) continue;
      if (!reduced && r < rank) continue;
      u64 f = m.at(r, col);
      if (f == 0) continue;
      for (std::size_t c = col; c < m.cols(); ++c)
        m.at(r, c) = F.sub(m.at(r, c), F.mul(f, m.at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

std::size_t fq_rank(FqMat m) { return fq_row_reduce(m, false); }

FqMat fq_kernel(const FqMat& m) {
  FqMat r = m;
  std::size_t rank = fq_row_reduce(r, true);
  // Locate pivot columns.
  std::vector<std::size_t> pivot_col(rank);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t i = 0, c = 0; i < rank; ++i) {
    while (r.at(i, c) == 0) ++c;
    pivot_col[i] = c;
    is_pivot[c] = true;
  }
  const FiniteField& F = *m.field();
  FqMat kern(m.field(), m.cols(), m.cols() - rank);
  std::size_t k = 0;
  for (std::size_t free_c = 0; free_c < m.cols(); ++free_c) {
    if (is_pivot[free_c]) continue;
    kern.at(free_c, k) = 1;
    for (std::size_t i = 0; i < rank; ++i)
      kern.at(pivot_col[i], k) = F.neg(r.at(i, free_c));
    ++k;
  }
  return kern;
}

std::optional<std::vector<u64>> fq_solve(FqMat m, std::vector<u64> b) {
  if (b.size() != m.rows()) throw std::invalid_argument("fq_solve: size mismatch");
  const FiniteField& F = *m.field();
  // Augment and reduce.
  FqMat aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols()) = b[r];
  }
  fq_row_reduce(aug, true);
  std::vector<u64> x(m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t c = 0;
    while (c < m.cols() && aug.at(r, c) == 0) ++c;
    if (c == m.cols()) {
      if (aug.at(r, m.cols()) != 0) return std::nullopt;  // 0 = nonzero
      continue;
    }
    x[c] = aug.at(r, m.cols());
  }
  // Verify (free variables were set to zero).
  if (m.mul_vec(x) != b) return std::nullopt;
  (void)F;
  return x;
}

LinearCode LinearCode::from_generator(FqMat g) {
  if (g.cols() > 0 && fq_rank(g) != g.cols())
    throw std::invalid_argument("generator matrix must have full column rank");
  return LinearCode(std::move(g));
}

LinearCode LinearCode::from_parity(const FqMat& h) {
  FqMat kern = fq_kernel(h);
  return LinearCode(std::move(kern));
}

LinearCode LinearCode::zero_code(FieldPtr f, std::size_t m) {
  return LinearCode(FqMat(std::move(f), m, 0));
}

LinearCode LinearCode::full_space(FieldPtr f, std::size_t m) {
  FqMat g(std::move(f), m, m);
  for (std::size_t i = 0; i < m; ++i) g.at(i, i) = 1;
  return LinearCode(std::move(g));
}

LinearCode LinearCode::repetition(FieldPtr f, std::size_t m) {
  FqMat g(std::move(f), m, 1);
  for (std::size_t i = 0; i < m; ++i) g.at(i, 0) = 1;
  return LinearCode(std::move(g));
}

const FqMat& LinearCode::parity_check() const {
  if (!parity_) {
    // Rows of H span the dual: kernel of G^T.
    parity_ = fq_kernel(gen_.transpose()).transpose();
  }
  return *parity_;
}

bool LinearCode::contains(const std::vector<u64>& word) const {
  if (word.size() != block_length()) throw std::invalid_argument("contains: length mismatch");
  if (dimension() == 0) return hamming_weight(word) == 0;
  const FqMat& h = parity_check();
  if (h.rows() == 0) return true;  // full space
  return hamming_weight(h.mul_vec(word)) == 0;
}

std::optional<std::vector<u64>> LinearCode::coefficients_of(const std::vector<u64>& word) const {
  return fq_solve(gen_, word);
}

std::vector<u64> LinearCode::encode(const std::vector<u64>& message) const {
  return gen_.mul_vec(message);
}

Int LinearCode::codeword_count() const {
  Int q(field()->order());
  Int total = 1;
  for (std::size_t i = 0; i < dimension(); ++i) total *= q;
  return total;
}

Int binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Int r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r *= Int(n - i);
    r /= Int(i + 1);
  }
  return r;
}

Int HammingBall::size() const {
  const Int qm1(field->order() - 1);
  Int total = 0, pw = 1;
  for (u64 i = 0; i <= radius && i <= length; ++i) {
    total += binomial(length, static_cast<std::size_t>(i)) * pw;
    pw *= qm1;
  }
  return total;
}

void enumerate_ball(const HammingBall& ball, std::uint64_t budget,
                    const std::function<bool(const std::vector<u64>&)>& visit) {
  if (ball.size() > budget) throw BudgetExceeded("enumerate_ball: ball exceeds budget");
  const u64 q = ball.field->order();
  const std::size_t m = ball.length;
  std::vector<u64> word(m, 0);

  // Weight 0.
  if (!visit(word)) return;

  std::vector<std::size_t> support;
  std::vector<u64> values;
  // Recursive descent over supports in lexicographic order; for each support
  // of size w, odometer over nonzero values with the last position fastest.
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t next, std::size_t remaining) -> bool {
    if (remaining == 0) {
      values.assign(support.size(), 1);
      for (;;) {
        for (std::size_t i = 0; i < support.size(); ++i) word[support[i]] = values[i];
        bool cont = visit(word);
        for (std::size_t i : support) word[i] = 0;
        if (!cont) return false;
        std::size_t pos = support.size();
        while (pos > 0) {
          if (values[pos - 1] + 1 < q) {
            ++values[pos - 1];
            break;
          }
          values[pos - 1] = 1;
          --pos;
        }
        if (pos == 0) return true;
      }
    }
    for (std::size_t i = next; i + remaining <= m; ++i) {
      support.push_back(i);
      if (!rec(i + 1, remaining - 1)) return false;
      support.pop_back();
    }
    return true;
  };

  for (u64 w = 1; w <= ball.radius && w <= m; ++w) {
    support.clear();
    if (!rec(0, static_cast<std::size_t>(w))) return;
  }
}

namespace {

// Cost of enumerating all q^n messages, saturating at a sentinel.
std::uint64_t message_enumeration_cost(u64 q, std::size_t n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / q) return cap + 1;
    total *= q;
  }
  return total;
}

// Walk all nonzero messages in odometer order over canonical values,
// tracking the codeword incrementally. Canonical-integer steps are not field
// additions in extension fields, so each digit change applies an explicit
// field delta to the running word.
template <typename Fn>
void for_each_nonzero_codeword(const LinearCode& c, Fn&& fn) {
  const FiniteField& F = *c.field();
  const FqMat& g = c.generator();
  const std::size_t n = c.dimension(), m = c.block_length();
  const u64 q = F.order();
  std::vector<u64> msg(n, 0), word(m, 0);
  auto apply_delta = [&](std::size_t pos, u64 from, u64 to) {
    u64 delta = F.sub(to, from);
    if (delta == 0) return;
    for (std::size_t r = 0; r < m; ++r) {
      u64 col = g.at(r, pos);
      if (col != 0) word[r] = F.add(word[r], F.mul(delta, col));
    }
  };
  for (;;) {
    std::size_t pos = 0;
    while (pos < n && msg[pos] + 1 == q) {
      apply_delta(pos, q - 1, 0);
      msg[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
    apply_delta(pos, msg[pos], msg[pos] + 1);
    ++msg[pos];
    if (!fn(msg, word)) return;
  }
}

}  // namespace

DistanceReport min_distance(const LinearCode& c, const DistanceOptions& opt) {
  DistanceReport rep;
  if (c.dimension() == 0) {
    rep.strategy = DistanceStrategy::ZeroCode;
    return rep;  // lambda of the zero code: +infinity sentinel
  }
  const u64 q = c.field()->order();
  const std::uint64_t msg_cost = message_enumeration_cost(q, c.dimension(), opt.budget);

  u64 cap = opt.radius_cap.value_or(static_cast<u64>(c.block_length()));
  HammingBall ball{c.field(), c.block_length(), cap};
  const bool ball_fits = ball.size() <= opt.budget;

  if (msg_cost <= opt.budget && (!ball_fits || Int(msg_cost) <= ball.size())) {
    rep.strategy = DistanceStrategy::MessageEnumeration;
    std::optional<u64> best;
    for_each_nonzero_codeword(c, [&](const std::vector<u64>&, const std::vector<u64>& word) {
      ++rep.visited;
      u64 w = hamming_weight(word);
      if (!best || w < *best) best = w;
      return !(best && *best == 1);  // cannot do better than 1
    });
    if (opt.radius_cap && best && *best > *opt.radius_cap) best.reset();
    rep.distance = best;
    rep.radius_cap = opt.radius_cap;
    return rep;
  }

  if (ball_fits) {
    rep.strategy = DistanceStrategy::BallEnumeration;
    rep.radius_cap = cap;
    const FqMat& h = c.parity_check();
    std::optional<u64> best;
    // Weight-major order lets us stop at the first weight with a codeword.
    enumerate_ball(ball, opt.budget, [&](const std::vector<u64>& word) {
      ++rep.visited;
      u64 w = hamming_weight(word);
      if (w == 0) return true;
      if (best && *best < w) return false;
      if (h.rows() == 0 || hamming_weight(h.mul_vec(word)) == 0) {
        best = w;
        return false;
      }
      return true;
    });
    rep.distance = best;
    return rep;
  }

  throw BudgetExceeded("min_distance: no exact strategy fits the budget");
}

DistanceReport nearest_codeword_distance(const LinearCode& c, const std::vector<u64>& target,
                                         const DistanceOptions& opt) {
  if (target.size() != c.block_length())
    throw std::invalid_argument("nearest_codeword_distance: length mismatch");
  DistanceReport rep;
  const FiniteField& F = *c.field();
  if (c.dimension() == 0) {
    rep.strategy = DistanceStrategy::ZeroCode;
    rep.distance = hamming_weight(target);
    return rep;
  }
  const std::uint64_t msg_cost = message_enumeration_cost(F.order(), c.dimension(), opt.budget);
  if (msg_cost <= opt.budget) {
    rep.strategy = DistanceStrategy::MessageEnumeration;
    u64 best = hamming_weight(target);  // message 0
    rep.visited = 1;
    for_each_nonzero_codeword(c, [&](const std::vector<u64>&, const std::vector<u64>& word) {
      ++rep.visited;
      u64 w = 0;
      for (std::size_t i = 0; i < word.size(); ++i)
        if (word[i] != target[i]) ++w;
      best = std::min(best, w);
      return best != 0;
    });
    rep.distance = best;
    if (opt.radius_cap && best > *opt.radius_cap) rep.distance.reset();
    rep.radius_cap = opt.radius_cap;
    return rep;
  }

  // Ball strategy: search e with ||e||_0 <= cap and target - e in the code.
  u64 cap = opt.radius_cap.value_or(static_cast<u64>(c.block_length()));
  HammingBall ball{c.field(), c.block_length(), cap};
  if (ball.size() <= opt.budget) {
    rep.strategy = DistanceStrategy::BallEnumeration;
    rep.radius_cap = opt.radius_cap;
    std::optional<u64> best;
    std::vector<u64> cand(c.block_length());
    enumerate_ball(ball, opt.budget, [&](const std::vector<u64>& err) {
      ++rep.visited;
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = F.sub(target[i], err[i]);
      if (c.contains(cand)) {
        best = hamming_weight(err);
        return false;  // weight-major order: first hit is minimal
      }
      return true;
    });
    rep.distance = best;
    return rep;
  }
  throw BudgetExceeded("nearest_codeword_distance: no exact strategy fits the budget");
}

LinearCode tensor_codes(const LinearCode& a, const LinearCode& b) {
  if (!a.field()->same(*b.field())) throw std::invalid_argument("tensor_codes: field mismatch");
  const FiniteField& F = *a.field();
  const FqMat& ga = a.generator();
  const FqMat& gb = b.generator();
  FqMat g(a.field(), ga.rows() * gb.rows(), ga.cols() * gb.cols());
  for (std::size_t i = 0; i < ga.rows(); ++i)
    for (std::size_t j = 0; j < ga.cols(); ++j) {
      u64 v = ga.at(i, j);
      if (v == 0) continue;
      for (std::size_t k = 0; k < gb.rows(); ++k)
        for (std::size_t l = 0; l < gb.cols(); ++l) {
          u64 w = gb.at(k, l);
          if (w != 0) g.at(i * gb.rows() + k, j * gb.cols() + l) = F.mul(v, w);
        }
    }
  return LinearCode::from_generator(std::move(g));
}

LinearCode intersect_codes(const LinearCode& a, const LinearCode& b) {
  if (!a.field()->same(*b.field())) throw std::invalid_argument("intersect_codes: field mismatch");
  if (a.block_length() != b.block_length())
    throw std::invalid_argument("intersect_codes: block length mismatch");
  const FqMat& ha = a.parity_check();
  const FqMat& hb = b.parity_check();
  FqMat stacked(a.field(), ha.rows() + hb.rows(), a.block_length());
  for (std::size_t r = 0; r < ha.rows(); ++r)
    for (std::size_t c = 0; c < ha.cols(); ++c) stacked.at(r, c) = ha.at(r, c);
  for (std::size_t r = 0; r < hb.rows(); ++r)
    for (std::size_t c = 0; c < hb.cols(); ++c) stacked.at(ha.rows() + r, c) = hb.at(r, c);
  return LinearCode::from_parity(stacked);
}

u64 hamming_weight(const std::vector<u64>& v) {
  u64 w = 0;
  for (u64 x : v)
    if (x != 0) ++w;
  return w;
}

}  // namespace gforge
