#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdop/expression.hpp"
#include "qdop/linalg.hpp"

namespace qdop {

enum class BasisId { D_basis, G_basis, PBW_weyl, SkewGroup_basis, W_basis };

std::string_view basis_name(BasisId b);
std::optional<BasisId> basis_from_name(std::string_view name);

// Ordered product of generator powers; no letters means the identity.
struct BasisElement {
  std::vector<std::pair<std::string, int64_t>> letters;

  std::string descriptor() const;  // e.g. x^2*d1*d, or 1
  int64_t degree() const;          // total number of letters, sigma letters excluded
  int64_t count(std::string_view letter) const;
  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

ShiftOp evaluate(const BasisElement& b, const AlgebraPreset& preset);

struct CoordinateTerm {
  BasisElement element;
  Scalar coeff;
};
// Sorted by descriptor, no zero coefficients.
using Coordinates = std::vector<CoordinateTerm>;

ShiftOp expand(const Coordinates& c, const AlgebraPreset& preset);
// (1/(q - 1))*d1 + (-1/(q - 1))*dm1
std::string render(const Coordinates& c, const ParamField& field);

struct BasisConstraint {
  std::optional<int64_t> degree;      // exact degree
  std::optional<int64_t> max_degree;  // degree bound
  std::optional<IVec> shift;          // single shift
  int32_t gamma_bound = 1;            // SkewGroup_basis: gamma in [-b, b]^n
};

// n is the rank for PBW_weyl and SkewGroup_basis and ignored otherwise.
// Requires degree or max_degree.
std::vector<BasisElement> enumerate_basis(BasisId basis, const BasisConstraint& c, std::size_t n = 1);

// Special monomials a^j and a^j d a^k d^l (k > 0) in the pair (a, d) of total degree n.
std::vector<BasisElement> special_monomials(const std::string& a, const std::string& d, int64_t n);

struct CoordinateOptions {
  // Nonzero: candidate order is shuffled with this seed before solving.
  uint64_t shuffle_seed = 0;
};

// nullopt when op is not in the span of the basis.
std::optional<Coordinates> coordinates_in_basis(const ShiftOp& op, BasisId basis, const AlgebraPreset& preset,
                                                const CoordinateOptions& opts = {});

// Cofactor psi with op = psi * x in D, or nullopt (op not in Dx). Requires a
// one-variable preset.
std::optional<Coordinates> membership_in_left_ideal_x(const ShiftOp& op, const AlgebraPreset& preset);

// psi_j with [j]_q d^j - j q^j d1 d^{j-1} = psi_j * x, recomposition-verified.
Coordinates claim_cofactor(int64_t j, const AlgebraPreset& preset);

struct OreWitness {
  int64_t k = 0;
  Coordinates cofactor;
};
// Smallest k <= kmax with g x^k = x^j psi for psi in D.
OreWitness ore_witness(const ShiftOp& g, int64_t j, int64_t kmax, const AlgebraPreset& preset);

enum class DimMethod { Auto, Exact, DualPrime };

struct DimResult {
  std::size_t dimension = 0;
  DimMethod method = DimMethod::Exact;
};

// Dimension of the span of all words of length n in gens. Auto uses exact
// elimination up to n = 4 and dual-prime specialization with exact
// confirmation beyond.
DimResult graded_dimension(const std::vector<ShiftOp>& gens, std::size_t n, DimMethod method = DimMethod::Auto);
DimResult graded_dimension(const AlgebraPreset& preset, const std::vector<std::string>& names, std::size_t n,
                           DimMethod method = DimMethod::Auto);

// Coefficients of (1 + t^2)(1 - t)^{-3} up to t^N.
std::vector<std::size_t> hilbert_coefficients(std::size_t N);

// Exact dimension of the span of a family of operators.
std::size_t span_dimension(const std::vector<ShiftOp>& ops);

// Coordinate vectors of ops along shared (shift, character, m-monomial) axes.
struct Vectorized {
  std::vector<SparseVec> vecs;
  std::size_t naxes = 0;
};
Vectorized vectorize(const std::vector<ShiftOp>& ops);

}  // namespace qdop
