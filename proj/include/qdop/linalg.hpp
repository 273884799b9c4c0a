#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdop/scalar.hpp"

namespace qdop {

struct ModMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<uint32_t> a;

  ModMatrix() = default;
  ModMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  uint32_t* row(std::size_t i) { return a.data() + i * cols; }
  const uint32_t* row(std::size_t i) const { return a.data() + i * cols; }
  uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

uint32_t inv_mod(uint32_t a, uint32_t p);

// Row echelon form over F_p. pivot_rows[k], pivot_cols[k] index the original
// matrix and select a nonsingular rank x rank submatrix.
struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> pivot_cols;
};

RankProfile rank_profile_mod(ModMatrix m, uint32_t p);

using ScalarMatrix = std::vector<std::vector<Scalar>>;

// Exact solve of a square system; nullopt when singular.
std::optional<std::vector<Scalar>> solve_square(ScalarMatrix a, std::vector<Scalar> b);
// Same, for several right-hand sides (each of length n).
std::optional<std::vector<std::vector<Scalar>>> solve_square_multi(ScalarMatrix a,
                                                                   std::vector<std::vector<Scalar>> rhs);
// Solution of a x = b with free variables set to zero, or nullopt.
std::optional<std::vector<Scalar>> solve_exact(ScalarMatrix a, std::vector<Scalar> b);
std::size_t rank_exact(ScalarMatrix a);

// Sparse vectors over integer axis ids, used when the ambient dimension is only
// known after collecting all supports.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

// Point at which parameters are specialized for pivot selection: attempt k
// uses distinct primes >= 101, reduced mod kernels::kPrime.
std::vector<uint32_t> specialization_point(std::size_t nparams, unsigned attempt);

// Mod-p image of the matrix whose columns are cols, or nullopt when an entry
// has a vanishing denominator at the point.
std::optional<ModMatrix> reduce_columns(const std::vector<SparseVec>& cols, std::size_t naxes,
                                        std::span<const uint32_t> point);

// x with sum_j x_j cols[j] = target, exact. Pivots come from a mod-p image;
// the candidate solution is confirmed on every axis and falls back to full
// exact elimination when the reduced rank is deficient.
std::optional<std::vector<Scalar>> solve_in_span(const std::vector<SparseVec>& cols,
                                                 const SparseVec& target, std::size_t naxes,
                                                 std::size_t nparams);
// Exact rank of the family, by the same pivot-then-confirm scheme.
std::size_t rank_of_family(const std::vector<SparseVec>& vecs, std::size_t naxes, std::size_t nparams);

}  // namespace qdop
