#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wcw/errors.hpp"

namespace wcw::gf {

// Hard cap on the extension degree. Large enough for every shipped scenario
// (the classification drivers never need more than m = p with p <= 11).
inline constexpr uint32_t kMaxDegree = 12;

// Element of F_{p^m}: coordinates in the power basis of the field modulus,
// low degree first, all in [0, p). Pure value type; `fid` identifies the
// parent field and is checked on every binary operation.
struct FieldElement {
  uint32_t fid = 0;
  std::array<uint16_t, kMaxDegree> c{};

  bool operator==(const FieldElement&) const = default;
  bool operator<(const FieldElement& o) const;  // coordinate-lexicographic, for canonical ordering
};

// F_{p^m} with exact arithmetic. The modulus is the least monic irreducible
// polynomial of degree m over F_p, "least" meaning the smallest base-p
// integer encoding sum a_i p^i of the non-leading coefficients; this makes
// field construction deterministic across runs and platforms.
class Field {
 public:
  // Throws NonPrime if p is composite or p <= 3; TooLarge if m > kMaxDegree.
  Field(uint32_t p, uint32_t m);

  uint32_t p() const { return p_; }
  uint32_t degree() const { return m_; }
  uint32_t fid() const { return fid_; }
  // Monic modulus, coefficients low-to-high, size m+1.
  const std::vector<uint16_t>& modulus() const { return modulus_; }
  // p^m as uint64; throws TooLarge if it does not fit.
  uint64_t order() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_residue(uint64_t r) const;
  FieldElement from_coords(const std::vector<uint16_t>& coords) const;
  // Element with index i in the canonical enumeration (base-p digits, low
  // coordinate = least significant digit).
  FieldElement element_at(uint64_t index) const;
  uint64_t index_of(const FieldElement& a) const;

  bool is_zero(const FieldElement& a) const;
  bool in_prime_subfield(const FieldElement& a) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul_residue(const FieldElement& a, uint64_t r) const;
  // Throws DivisionByZero on inv(0).
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, uint64_t e) const;

  // a -> a^p. Bijective; implemented as the precomputed F_p-linear map on
  // coordinates.
  FieldElement frobenius(const FieldElement& a) const;
  // The unique b with b^p = a (inverse of Frobenius, i.e. a^{p^{m-1}}).
  FieldElement pth_root(const FieldElement& a) const;

  // All lambda with lambda^p - lambda = c, solved as an F_p-linear system on
  // the coordinate space. Returns an empty vector ("not split") or exactly p
  // roots, sorted canonically.
  std::vector<FieldElement> artin_schreier_roots(const FieldElement& c) const;

  std::string to_string(const FieldElement& a) const;
  // Accepts "7" (residue) or "[c0,c1,...]" (coordinate tuple).
  FieldElement parse(const std::string& s) const;
  std::string describe() const;  // {p, m, modulus} in report form

  void check(const FieldElement& a) const {
    require(a.fid == fid_, Errc::FieldMismatch, "element belongs to a different field");
  }

  // Inverse of a nonzero residue mod p (table lookup).
  uint16_t inv_residue(uint16_t r) const;

  // Upper bound on how much one deferred axpy (see linalg) can add to an
  // accumulator slot; used to schedule lazy reductions.
  uint64_t axpy_growth_bound() const { return axpy_growth_; }
  // Reduction rows: x^{m+t} mod modulus, t = 0..m-2, coefficients < p.
  const std::vector<std::vector<uint16_t>>& reduction_rows() const { return red_; }

  bool operator==(const Field& o) const { return fid_ == o.fid_; }

 private:
  uint32_t p_ = 0;
  uint32_t m_ = 1;
  uint32_t fid_ = 0;
  std::vector<uint16_t> modulus_;
  std::vector<uint16_t> inv_table_;                // inverses of 1..p-1
  std::vector<std::vector<uint16_t>> frob_cols_;   // column j = coords of (x^j)^p
  std::vector<std::vector<uint16_t>> red_;
  uint64_t axpy_growth_ = 0;

  void build_tables();
};

bool is_prime(uint64_t n);

// Convenience wrapper matching the operation name used in reports.
inline Field field_create(uint32_t p, uint32_t m) { return Field(p, m); }

}  // namespace wcw::gf
