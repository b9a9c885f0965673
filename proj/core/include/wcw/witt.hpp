#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wcw/gf.hpp"

namespace wcw::witt {

using gf::Field;
using gf::FieldElement;

// Basis vector e_i t^j of the truncated current Witt algebra: Witt degree i
// in [-1, p-2], t-power j in [0, ell].
struct BasisIndex {
  int32_t i = 0;
  uint32_t j = 0;

  bool operator==(const BasisIndex&) const = default;
  auto operator<=>(const BasisIndex&) const = default;
};

// The shape (p, ell) plus the coefficient field. dim = (ell+1) * p.
struct AlgebraShape {
  uint32_t p = 5;
  uint32_t ell = 0;
  Field field;

  AlgebraShape(uint32_t p_, uint32_t ell_, Field f) : p(p_), ell(ell_), field(std::move(f)) {
    require(field.p() == p, Errc::FieldMismatch, "field characteristic differs from shape p");
  }

  uint32_t dim() const { return (ell + 1) * p; }
  uint64_t id() const { return (static_cast<uint64_t>(field.fid()) << 16) ^ (static_cast<uint64_t>(p) << 8) ^ ell; }

  uint32_t lin(BasisIndex b) const {
    require(b.i >= -1 && b.i <= static_cast<int32_t>(p) - 2 && b.j <= ell, Errc::OutOfRange,
            "basis index out of range");
    return static_cast<uint32_t>(b.i + 1) * (ell + 1) + b.j;
  }
  BasisIndex basis(uint32_t lin) const {
    require(lin < dim(), Errc::OutOfRange, "linear index out of range");
    return BasisIndex{static_cast<int32_t>(lin / (ell + 1)) - 1, lin % (ell + 1)};
  }
};

// Sparse element of W_ell: canonical (sorted, no zero coefficients).
struct LieElement {
  uint64_t shape_id = 0;
  std::vector<std::pair<uint32_t, FieldElement>> terms;  // (linear index, coeff)

  bool is_zero() const { return terms.empty(); }
};

// Linear functional chi on W_ell, stored by its values on the basis.
struct PChar {
  uint64_t shape_id = 0;
  std::map<uint32_t, FieldElement> values;  // only nonzero entries

  bool is_zero() const { return values.empty(); }
  bool operator==(const PChar&) const = default;
};

enum class ScenarioTag { HeightMinusOne, Height0, Height1A, Height1B, HeightR };

std::string scenario_name(ScenarioTag tag, uint32_t r = 0);
ScenarioTag parse_scenario(const std::string& name, uint32_t* r_out);

// The algebra object: owns the shape and the memoized structure-constant
// table used by the straightening hot path. Immutable after construction.
class Witt {
 public:
  explicit Witt(AlgebraShape shape);

  const AlgebraShape& shape() const { return shape_; }
  const Field& field() const { return shape_.field; }
  uint32_t dim() const { return shape_.dim(); }

  LieElement zero_element() const { return LieElement{shape_.id(), {}}; }
  LieElement basis_element(BasisIndex b) const;
  LieElement make(const std::vector<std::pair<BasisIndex, FieldElement>>& terms) const;

  LieElement add(const LieElement& a, const LieElement& b) const;
  LieElement scale(const LieElement& a, const FieldElement& c) const;

  // [a, b], bilinear extension of [e_i t^k, e_j t^l] = (j-i) e_{i+j} t^{k+l};
  // terms leave the algebra (Witt degree outside [-1, p-2] or t-power > ell)
  // vanish.
  LieElement bracket(const LieElement& a, const LieElement& b) const;
  // Structure constants on basis pairs: either empty or a single term
  // (coeff, target linear index) with coeff in [1, p).
  std::optional<std::pair<uint32_t, uint32_t>> bracket_basis(uint32_t a, uint32_t b) const;

  // p-map on a basis element: (e_i t^k)^[p] = delta_{i,0} e_0 t^{kp}.
  std::optional<uint32_t> p_map_basis(uint32_t lin) const;
  // p-map of c * e_i t^k = c^p (e_i t^k)^[p]; throws NotBasisElement on sums.
  LieElement p_map(const LieElement& x) const;

  // Basis index lists for W_{ell,(i)} (filtration), W_{ell,[i]} (Witt-degree
  // graded piece) and W_ell^[j] = W x t^j (t-graded piece).
  std::vector<BasisIndex> filtration(int32_t i) const;
  std::vector<BasisIndex> graded(int32_t i) const;
  std::vector<BasisIndex> tgraded(uint32_t j) const;

  PChar zero_chi() const { return PChar{shape_.id(), {}}; }
  PChar make_chi(const std::vector<std::pair<BasisIndex, FieldElement>>& values) const;
  FieldElement chi_at(const PChar& chi, BasisIndex b) const;
  FieldElement chi_eval(const PChar& chi, const LieElement& x) const;

  // Height r(chi): least i in [-1, p-2] with chi(W_{ell,(i)}) = 0. Throws
  // NoVanishing when chi is supported in Witt degree p-2 (no such i exists).
  int32_t height(const PChar& chi) const;

  // Deterministic chi satisfying the tagged hypotheses; all generated values
  // lie in the prime subfield so drivers can re-embed after a field
  // extension. Throws Infeasible when the tag cannot hold for this shape.
  PChar scenario_chi(ScenarioTag tag, uint64_t seed, uint32_t r = 0) const;

  void check(const LieElement& x) const {
    require(x.shape_id == shape_.id(), Errc::ShapeMismatch, "element from a different algebra shape");
  }
  void check(const PChar& chi) const {
    require(chi.shape_id == shape_.id(), Errc::ShapeMismatch, "p-character from a different algebra shape");
  }

  std::string to_string(const LieElement& x) const;
  std::string chi_to_string(const PChar& chi) const;

 private:
  AlgebraShape shape_;
  // (coeff, target+1) packed; 0 target means bracket vanishes
  std::vector<std::pair<uint32_t, uint32_t>> bracket_table_;

  LieElement canonical(std::map<uint32_t, FieldElement>&& acc) const;
};

// chi as JSON {"p":..,"ell":..,"values":{"e(i,j)":"<elem>",...}}.
std::string chi_to_json(const Witt& W, const PChar& chi);
PChar chi_from_json(const Witt& W, const std::string& json_text);
// Parse just (p, ell) so the caller can construct the algebra first.
void chi_json_shape(const std::string& json_text, uint32_t* p, uint32_t* ell);

}  // namespace wcw::witt
