#include <algorithm>
#include <numeric>

#include "qdop/error.hpp"
#include "qdop/kernels.hpp"
#include "qdop/linalg.hpp"

namespace qdop {

uint32_t inv_mod(uint32_t a, uint32_t p) {
  int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr) {
    int64_t qt = r / nr;
    t -= qt * nt;
    std::swap(t, nt);
    r -= qt * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DivisionByZero("no inverse mod p");
  return static_cast<uint32_t>(t < 0 ? t + p : t);
}

RankProfile rank_profile_mod(ModMatrix m, uint32_t p) {
  RankProfile rp;
  std::vector<std::size_t> order(m.rows);
  std::iota(order.begin(), order.end(), 0);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m.at(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r) {
      std::swap_ranges(m.row(piv), m.row(piv) + m.cols, m.row(r));
      std::swap(order[piv], order[r]);
    }
    kernels::scale_mod(m.row(r) + c, inv_mod(m.at(r, c), p), m.cols - c, p);
    for (std::size_t i = r + 1; i < m.rows; ++i) {
      uint32_t f = m.at(i, c);
      if (f) kernels::submul_mod(m.row(i) + c, m.row(r) + c, f, m.cols - c, p);
    }
    rp.pivot_rows.push_back(order[r]);
    rp.pivot_cols.push_back(c);
    ++r;
  }
  rp.rank = r;
  return rp;
}

namespace {

std::size_t weight(const Scalar& s) { return s.num().terms().size() + s.den().terms().size(); }

}  // namespace

std::optional<std::vector<Scalar>> solve_square(ScalarMatrix a, std::vector<Scalar> b) {
  std::size_t n = a.size();
  if (b.size() != n) throw InvariantBreach("solve_square: size mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (!a[i][c].is_zero() && (piv == n || weight(a[i][c]) < weight(a[piv][c]))) piv = i;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    Scalar inv = a[c][c].inverse();
    for (std::size_t j = c; j < n; ++j) a[c][j] = a[c][j] * inv;
    b[c] = b[c] * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < n; ++j)
        if (!a[c][j].is_zero()) a[i][j] = a[i][j] - f * a[c][j];
      b[i] = b[i] - f * b[c];
    }
  }
  return b;
}

std::size_t rank_exact(ScalarMatrix a) {
  std::size_t rows = a.size();
  if (rows == 0) return 0;
  std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!a[i][c].is_zero() && (piv == rows || weight(a[i][c]) < weight(a[piv][c]))) piv = i;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    Scalar inv = a[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!a[r][j].is_zero()) a[i][j] = a[i][j] - f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace qdop

namespace qdop {

std::optional<std::vector<std::vector<Scalar>>> solve_square_multi(ScalarMatrix a,
                                                                   std::vector<std::vector<Scalar>> rhs) {
  std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (!a[i][c].is_zero() && (piv == n || weight(a[i][c]) < weight(a[piv][c]))) piv = i;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    for (auto& b : rhs) std::swap(b[piv], b[c]);
    Scalar inv = a[c][c].inverse();
    for (std::size_t j = c; j < n; ++j) a[c][j] = a[c][j] * inv;
    for (auto& b : rhs) b[c] = b[c] * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < n; ++j)
        if (!a[c][j].is_zero()) a[i][j] = a[i][j] - f * a[c][j];
      for (auto& b : rhs)
        if (!b[c].is_zero()) b[i] = b[i] - f * b[c];
    }
  }
  return rhs;
}

std::optional<std::vector<Scalar>> solve_exact(ScalarMatrix a, std::vector<Scalar> b) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!a[i][c].is_zero() && (piv == rows || weight(a[i][c]) < weight(a[piv][c]))) piv = i;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    Scalar inv = a[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    b[r] = b[r] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!a[r][j].is_zero()) a[i][j] = a[i][j] - f * a[r][j];
      b[i] = b[i] - f * b[r];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  std::vector<Scalar> x(cols);
  for (std::size_t k = 0; k < r; ++k) x[pivcol[k]] = b[k];
  return x;
}

namespace {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

ScalarMatrix dense(const std::vector<SparseVec>& cols, std::size_t naxes) {
  ScalarMatrix m(naxes, std::vector<Scalar>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [axis, v] : cols[j]) m[axis][j] = v;
  return m;
}

}  // namespace

std::vector<uint32_t> specialization_point(std::size_t nparams, unsigned attempt) {
  std::vector<uint32_t> pt;
  uint32_t n = 101;
  std::size_t skip = attempt * nparams;
  while (pt.size() < nparams) {
    if (is_prime(n)) {
      if (skip) --skip;
      else pt.push_back(n % kernels::kPrime);
    }
    ++n;
  }
  return pt;
}

std::optional<ModMatrix> reduce_columns(const std::vector<SparseVec>& cols, std::size_t naxes,
                                        std::span<const uint32_t> point) {
  ModMatrix m(naxes, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [axis, v] : cols[j]) {
      auto x = specialize_mod(v, point, kernels::kPrime);
      if (!x) return std::nullopt;
      m.at(axis, j) = *x;
    }
  return m;
}

namespace {

std::optional<RankProfile> profile_of(const std::vector<SparseVec>& cols, std::size_t naxes,
                                      std::size_t nparams) {
  for (unsigned attempt = 0; attempt < 4; ++attempt) {
    auto pt = specialization_point(nparams, attempt);
    auto m = reduce_columns(cols, naxes, pt);
    if (m) return rank_profile_mod(std::move(*m), kernels::kPrime);
  }
  return std::nullopt;
}

// Check sum_k y_k cols[pc[k]] == target on every axis.
bool confirms(const std::vector<SparseVec>& cols, const std::vector<std::size_t>& pc,
              const std::vector<Scalar>& y, const SparseVec& target, std::size_t naxes) {
  std::vector<Scalar> acc(naxes);
  for (std::size_t k = 0; k < pc.size(); ++k) {
    if (y[k].is_zero()) continue;
    for (const auto& [axis, v] : cols[pc[k]]) acc[axis] += y[k] * v;
  }
  for (const auto& [axis, v] : target) acc[axis] -= v;
  for (const auto& s : acc)
    if (!s.is_zero()) return false;
  return true;
}

std::vector<Scalar> restrict_to(const SparseVec& v, const std::vector<std::size_t>& rows,
                                std::size_t naxes) {
  std::vector<std::size_t> where(naxes, SIZE_MAX);
  for (std::size_t k = 0; k < rows.size(); ++k) where[rows[k]] = k;
  std::vector<Scalar> out(rows.size());
  for (const auto& [axis, s] : v)
    if (where[axis] != SIZE_MAX) out[where[axis]] = s;
  return out;
}

ScalarMatrix square_block(const std::vector<SparseVec>& cols, const RankProfile& rp, std::size_t naxes) {
  std::vector<std::size_t> where(naxes, SIZE_MAX);
  for (std::size_t k = 0; k < rp.rank; ++k) where[rp.pivot_rows[k]] = k;
  ScalarMatrix a(rp.rank, std::vector<Scalar>(rp.rank));
  for (std::size_t k = 0; k < rp.rank; ++k)
    for (const auto& [axis, s] : cols[rp.pivot_cols[k]])
      if (where[axis] != SIZE_MAX) a[where[axis]][k] = s;
  return a;
}

}  // namespace

std::optional<std::vector<Scalar>> solve_in_span(const std::vector<SparseVec>& cols,
                                                 const SparseVec& target, std::size_t naxes,
                                                 std::size_t nparams) {
  if (target.empty()) return std::vector<Scalar>(cols.size());
  auto rp = profile_of(cols, naxes, nparams);
  if (rp && rp->rank > 0) {
    auto y = solve_square(square_block(cols, *rp, naxes), restrict_to(target, rp->pivot_rows, naxes));
    if (!y) throw InvariantBreach("nonsingular mod-p block is singular over the field");
    if (confirms(cols, rp->pivot_cols, *y, target, naxes)) {
      std::vector<Scalar> x(cols.size());
      for (std::size_t k = 0; k < rp->rank; ++k) x[rp->pivot_cols[k]] = (*y)[k];
      return x;
    }
    // Full column rank: the solution is unique, so failure is conclusive.
    if (rp->rank == cols.size()) return std::nullopt;
  } else if (rp && cols.empty()) {
    return std::nullopt;
  }
  std::vector<Scalar> b(naxes);
  for (const auto& [axis, s] : target) b[axis] = s;
  return solve_exact(dense(cols, naxes), std::move(b));
}

std::size_t rank_of_family(const std::vector<SparseVec>& vecs, std::size_t naxes, std::size_t nparams) {
  if (vecs.empty()) return 0;
  auto rp = profile_of(vecs, naxes, nparams);
  if (!rp) return rank_exact(dense(vecs, naxes));
  if (rp->rank == vecs.size()) return rp->rank;
  std::vector<bool> is_pivot(vecs.size(), false);
  for (auto c : rp->pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> others;
  std::vector<std::vector<Scalar>> rhs;
  for (std::size_t j = 0; j < vecs.size(); ++j) {
    if (is_pivot[j]) continue;
    others.push_back(j);
    rhs.push_back(restrict_to(vecs[j], rp->pivot_rows, naxes));
  }
  if (rp->rank == 0) {
    for (const auto& v : vecs)
      for (const auto& [axis, s] : v)
        if (!s.is_zero()) return rank_exact(dense(vecs, naxes));
    return 0;
  }
  auto ys = solve_square_multi(square_block(vecs, *rp, naxes), std::move(rhs));
  if (!ys) throw InvariantBreach("nonsingular mod-p block is singular over the field");
  for (std::size_t k = 0; k < others.size(); ++k)
    if (!confirms(vecs, rp->pivot_cols, (*ys)[k], vecs[others[k]], naxes))
      return rank_exact(dense(vecs, naxes));
  return rp->rank;
}

}  // namespace qdop
