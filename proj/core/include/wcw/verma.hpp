#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wcw/linalg.hpp"
#include "wcw/witt.hpp"

namespace wcw::verma {

using gf::Field;
using gf::FieldElement;
using la::SparseMat;
using witt::AlgebraShape;
using witt::BasisIndex;
using witt::LieElement;
using witt::PChar;
using witt::Witt;

// Basis monomial of an induced module: exponent tuple over the ordered
// complement basis, packed as a mixed-radix (base p) rank. Position 0 is the
// least significant digit and the earliest factor in the PBW order.
struct PbwMonomial {
  uint64_t rank = 0;
};

// Sparse module vector: (monomial rank, coefficient), sorted, no zeros.
struct ModuleVector {
  std::vector<std::pair<uint64_t, FieldElement>> terms;

  bool is_zero() const { return terms.empty(); }
};

// Everything needed to induce from the one-dimensional W_{(cut)}-module:
// cut = 0 gives the chi-reduced Verma datum (mu(e_0) = lambda, mu(e_0 t^i) =
// chi_i), cut = s the height-r datum (mu = chi restricted). Both are
// validated against the one-dimensional U_chi-module conditions on
// construction.
struct InductionDatum {
  PChar chi;
  uint32_t cut = 0;
  std::optional<FieldElement> lambda;
  std::vector<FieldElement> mu;         // indexed by basis linear index; zero off W_{(cut)}
  std::vector<uint32_t> complement;     // ordered linear indices, degrees -1..cut-1
  std::vector<int32_t> pos_of;          // linear index -> complement position, or -1
  uint64_t dim = 0;                     // p^{complement.size()}
};

// Minimal module representation: the shape, chi and one action matrix per
// basis generator. Quotients and test fixtures use this directly; everything
// in modtools operates on it.
struct ModuleRep {
  std::shared_ptr<const Witt> algebra;
  PChar chi;
  uint32_t dim = 0;
  std::vector<SparseMat> action;  // indexed by generator linear index
  std::string label;

  const Witt& W() const { return *algebra; }
  const Field& field() const { return algebra->field(); }
};

struct InducedModule {
  ModuleRep rep;
  InductionDatum datum;

  uint32_t dim() const { return rep.dim; }
  const Witt& W() const { return rep.W(); }
  const Field& field() const { return rep.field(); }
};

// Monomial digit helpers (d = complement size, digits base p).
uint32_t monomial_digit(const Witt& W, const InductionDatum& d, uint64_t rank, uint32_t pos);
uint64_t monomial_total_degree(const Witt& W, const InductionDatum& d, uint64_t rank);
std::string monomial_to_string(const Witt& W, const InductionDatum& d, uint64_t rank);

// The recursive straightening engine. act_basis realizes
//   g . (y M' (x) v) = y . (g . (M' (x) v)) + [g,y] . (M' (x) v)
// with base case g . (1 (x) v) = mu(g) v for g in W_{(cut)} and exponent
// overflow reduced through y^p = y^[p] + chi(y)^p in U_chi. Results are
// memoized per (generator, monomial).
class Straightener {
 public:
  Straightener(std::shared_ptr<const Witt> W, InductionDatum datum);

  const InductionDatum& datum() const { return datum_; }
  const Witt& W() const { return *W_; }

  const ModuleVector& act_basis(uint32_t gen_lin, uint64_t rank);
  ModuleVector act(uint32_t gen_lin, const ModuleVector& v);
  ModuleVector act(const LieElement& x, const ModuleVector& v);

  // Column-by-column matrix of one generator.
  SparseMat matrix(uint32_t gen_lin);

 private:
  std::shared_ptr<const Witt> W_;
  InductionDatum datum_;
  std::vector<uint64_t> pw_;  // p^k for k <= complement size
  std::vector<std::unordered_map<uint64_t, ModuleVector>> memo_;

  ModuleVector compute(uint32_t gen_lin, uint64_t rank);
  ModuleVector leftmul_ordered(uint32_t pos, uint64_t rank);
  uint32_t leading_pos(uint64_t rank) const;
  uint32_t digit(uint64_t rank, uint32_t pos) const;
};

// Base-module scalars for induction from W_{(cut)}; validates both
// one-dimensional-module invariants (vanishing on the derived subalgebra and
// mu(x)^p - mu(x^[p]) = chi(x)^p on the basis). cut=0 requires height <= 1
// and lambda in Lambda(chi) (BadLambda otherwise); cut=s requires the
// height-r hypotheses.
InductionDatum base_scalars(const Witt& W, const PChar& chi, uint32_t cut,
                            const std::optional<FieldElement>& lambda);

// Lambda(chi) = { lambda : lambda^p - lambda = chi(e_0)^p }. Throws NotSplit
// with extension advice when empty over the working field.
std::vector<FieldElement> lambda_set(const Witt& W, const PChar& chi);

struct BuildOptions {
  bool verify = true;        // assert module axioms after construction
  std::string cache_dir;     // empty = no on-disk action cache
};

// chi-reduced Verma module Z_chi(lambda), dimension p^{ell+1}.
InducedModule build_verma(std::shared_ptr<const Witt> W, const PChar& chi, const FieldElement& lambda,
                          const BuildOptions& opts = {});
// Height-r module induced from W_{(s)}, s = floor(r/2); dimension
// p^{(ell+1)(s+1)}. Requires 1 < r < p-1 and chi(e_{r-1} t^ell) != 0.
InducedModule build_height_r(std::shared_ptr<const Witt> W, const PChar& chi,
                             const BuildOptions& opts = {});

// Bracket compatibility and the p-th power identity of U_chi, exact, on all
// generator (pairs). Throws ConditionFailed on the first violation.
void assert_module_axioms(const ModuleRep& rep);

// For cut = 0 modules: checks rho(e_0) is diagonal with eigenvalue
// lambda - (sum of exponents) on every PBW basis monomial.
bool verma_weights_diagonal(const InducedModule& M, std::string* detail = nullptr);

// Element construction y_{k,j} = e_{r-k} t^{ell-j} + sum b_{ell-j+i} y_{k,i}
// together with the verification record for the three separation conditions.
struct StradeRecord {
  uint32_t k = 0;
  uint32_t r = 0;
  std::vector<LieElement> ys;           // y_{k,0..ell}
  bool cond1 = false;                   // chi([e_{k-1}t^i, y_{k,j}]) nonzero iff i == j
  bool cond2 = false;                   // brackets and double brackets land in W_{(k)}
  bool cond3 = false;                   // chi kills [W_(k), W_(r-k)] + [r, r]
  FieldElement diagonal_value;          // common value (r+1-2k) chi(e_{r-1} t^ell)
};

StradeRecord strade_elements(const Witt& W, const PChar& chi, uint32_t k);

// Module vector <-> flat coordinate vector (coordinate index = monomial rank).
la::FlatVec to_flat(const Field& F, const ModuleVector& v, uint32_t dim);
ModuleVector from_flat(const Field& F, const la::FlatVec& v);

}  // namespace wcw::verma
