#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wcw/gf.hpp"

namespace wcw::la {

using gf::Field;
using gf::FieldElement;

// Flat coordinate vector over F_{p^m}: element i occupies slots [i*m, (i+1)*m).
// Slots may hold deferred (un-reduced) accumulations; `normalize` brings all
// slots back below p. All kernels keep exact congruence mod p at all times.
struct FlatVec {
  uint32_t n = 0;
  uint32_t m = 1;
  std::vector<uint64_t> s;

  static FlatVec zero(const Field& F, uint32_t n);
};

namespace vk {

void normalize(const Field& F, FlatVec& v);
FieldElement get(const Field& F, const FlatVec& v, uint32_t i);  // reduces on read
void set(const Field& F, FlatVec& v, uint32_t i, const FieldElement& e);
void add_scaled_at(const Field& F, FlatVec& v, uint32_t i, const FieldElement& a,
                   const FieldElement& b);  // v[i] += a*b, deferred
bool is_zero(const Field& F, const FlatVec& v);
// First index with nonzero element, or v.n if none.
uint32_t leading(const Field& F, const FlatVec& v, uint32_t from = 0);
// dst += c * src. src must be normalized; dst slots accumulate deferred.
void axpy(const Field& F, FlatVec& dst, const FlatVec& src, const FieldElement& c);
// v *= c, result normalized. v must be normalized.
void scale(const Field& F, FlatVec& v, const FieldElement& c);
FlatVec from_elems(const Field& F, const std::vector<FieldElement>& elems);
std::vector<FieldElement> to_elems(const Field& F, const FlatVec& v);
bool equal(const Field& F, const FlatVec& a, const FlatVec& b);

}  // namespace vk

// Forward (non-reduced) row echelon basis with exact arithmetic. Pivot ties
// break to the lowest column index. Insertion order independent final span;
// the monic reduced form produced by `reduced_rows` is canonical.
class EchelonBasis {
 public:
  EchelonBasis(const Field& F, uint32_t ncols);

  // Reduces v against the current rows; if nonzero, normalizes to a monic
  // pivot row and stores it. Returns the stored row (monic, normalized) when
  // the rank grew, nullopt otherwise.
  std::optional<FlatVec> insert(FlatVec v);
  // Reduce v in place against the rows (result normalized).
  void reduce(FlatVec& v) const;
  bool contains(FlatVec v) const;

  uint32_t rank() const { return static_cast<uint32_t>(rows_.size()); }
  uint32_t ncols() const { return ncols_; }
  const std::vector<FlatVec>& rows() const { return rows_; }
  const std::vector<uint32_t>& pivots() const { return pivots_; }

  // Back-eliminated (reduced row echelon) rows, sorted by pivot column.
  std::vector<FlatVec> reduced_rows() const;
  // Kernel of the row system, one reduced vector per free column.
  std::vector<FlatVec> nullspace() const;

 private:
  const Field* F_;
  uint32_t ncols_;
  std::vector<FlatVec> rows_;      // sorted by pivot column, monic
  std::vector<uint32_t> pivots_;   // parallel to rows_
  uint64_t defer_block_;
};

// Canonical subspace: monic reduced row echelon basis. Equality of subspaces
// is equality of the canonical rows.
struct Subspace {
  uint32_t ncols = 0;
  std::vector<FlatVec> rows;
  std::vector<uint32_t> pivots;

  uint32_t dim() const { return static_cast<uint32_t>(rows.size()); }
  static Subspace from_echelon(const EchelonBasis& e);
  bool contains(const Field& F, const FlatVec& v) const;
  bool operator==(const Subspace& o) const;
};

Subspace join(const Field& F, const Subspace& a, const Subspace& b);
Subspace intersect(const Field& F, const Subspace& a, const Subspace& b);
// Orthogonal complement under the standard dot pairing.
Subspace perp(const Field& F, const Subspace& a);

// Sparse matrix, column-major; entries sorted by row, no stored zeros.
struct SparseMat {
  uint32_t rows = 0, cols = 0;
  std::vector<std::vector<std::pair<uint32_t, FieldElement>>> col;

  static SparseMat zero(uint32_t r, uint32_t c);
  static SparseMat identity(const Field& F, uint32_t n);
};

SparseMat sp_add(const Field& F, const SparseMat& a, const SparseMat& b);
SparseMat sp_sub(const Field& F, const SparseMat& a, const SparseMat& b);
SparseMat sp_scale(const Field& F, const SparseMat& a, const FieldElement& c);
SparseMat sp_mul(const Field& F, const SparseMat& a, const SparseMat& b);
SparseMat sp_pow(const Field& F, const SparseMat& a, uint32_t e);
SparseMat sp_transpose(const SparseMat& a);
bool sp_equal(const SparseMat& a, const SparseMat& b);
uint64_t sp_nnz(const SparseMat& a);

// y = A * x (dense input/output).
FlatVec sp_apply(const Field& F, const SparseMat& a, const FlatVec& x);

// Dense matrix as a stack of FlatVec rows.
struct DenseMat {
  uint32_t rows = 0, cols = 0;
  std::vector<FlatVec> row;

  static DenseMat zero(const Field& F, uint32_t r, uint32_t c);
  static DenseMat from_sparse(const Field& F, const SparseMat& a);
};

DenseMat dm_mul(const Field& F, const DenseMat& a, const DenseMat& b);
void dm_add_scaled_sparse(const Field& F, DenseMat& acc, const SparseMat& a, const FieldElement& c);
DenseMat dm_transpose(const Field& F, const DenseMat& a);
bool dm_is_zero(const Field& F, const DenseMat& a);

}  // namespace wcw::la
