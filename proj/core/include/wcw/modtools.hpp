#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcw/verma.hpp"

namespace wcw::modtools {

using gf::Field;
using gf::FieldElement;
using la::DenseMat;
using la::FlatVec;
using la::Subspace;
using verma::InducedModule;
using verma::ModuleRep;

// Smallest subspace containing the seeds and closed under all generator
// actions (fixed-point iteration with echelon insertion).
Subspace spin(const ModuleRep& M, const std::vector<FlatVec>& seeds);
// Same, under the transposed (dual) action.
Subspace spin_dual(const ModuleRep& M, const std::vector<FlatVec>& seeds);

enum class IrrTag { Irreducible, ReducibleWithWitness, Inconclusive };

struct IrrVerdict {
  IrrTag tag = IrrTag::Inconclusive;
  std::optional<Subspace> witness;  // invariant proper nonzero subspace
  uint64_t seed = 0;
  uint32_t theta_samples = 0;

  bool irreducible() const { return tag == IrrTag::Irreducible; }
};

std::string irr_tag_name(IrrTag t);

// Randomized Norton criterion with deterministic seeding. Samples theta from
// the action algebra (random linear combinations of generators and up to
// 3-fold products) until singular; checks that every kernel line spins to the
// full space and every kernel line of theta^T spins to the full space under
// the dual action. A failing line yields a concrete invariant witness. After
// 64 non-singular samples returns Inconclusive.
IrrVerdict is_irreducible(const ModuleRep& M, uint64_t seed);

struct ModuleMorphismSpace {
  uint32_t dimension = 0;
  std::vector<DenseMat> basis;  // dim(N) x dim(M) matrices, each intertwining
};

// Kernel of { Phi rho_M(g) - rho_N(g) Phi = 0 : g over all generators },
// assembled generator-by-generator with incremental elimination. Requires
// the same chi on both sides and dim(M)*dim(N) <= bound (TooLarge).
ModuleMorphismSpace hom_space(const ModuleRep& M, const ModuleRep& N, uint64_t bound = 20000);

struct IntertwinerResult {
  bool applicable = false;
  std::string reason;          // why the candidate was rejected
  DenseMat phi;                // dim(Zlambda) x dim(Zmu), maps Z(mu) -> Z(lambda)
};

// Explicit homomorphism candidate Z_chi(mu) -> Z_chi(lambda) sending v_mu to
// w = (e_{-1} t^ell)^{[lambda-mu]} (x) v_lambda, extended by equivariance.
// Returns NotApplicable (applicable=false) when the annihilation conditions
// e_i.w = 0, e_0.w = mu w, e_0 t^j.w = chi_j w, e_i t^j.w = 0 fail; a
// returned map is verified to intertwine on all generators.
IntertwinerResult intertwiner_candidate(const InducedModule& Zlambda, const InducedModule& Zmu);

struct SocleInfo {
  Subspace socle;                     // sum of minimal submodules
  Subspace radical;                   // intersection of maximal proper submodules
  std::vector<uint32_t> submodule_dims;  // all submodules, dims sorted (0 and full included)
  std::vector<uint32_t> maximal_dims;    // dims of maximal proper submodules
};

// Exhaustive submodule lattice by spinning from every nonzero vector up to
// scalar and closing under sums. Requires dim(M) <= 32 and a feasible line
// count (TooLarge otherwise).
SocleInfo socle_and_maximal(const ModuleRep& M);

// Induced action on a complement coordinate system; module axioms are
// re-asserted. Throws NotInvariant if S is not stable, ZeroQuotient if S is
// the full space.
ModuleRep quotient(const ModuleRep& M, const Subspace& S, const std::string& label);

// Enumeration of the 1-dimensional subspaces of span(basis): canonical
// representatives, deterministic order. Throws TooLarge past the cap.
std::vector<FlatVec> enumerate_lines(const Field& F, const std::vector<FlatVec>& basis,
                                     uint64_t cap = 1u << 22);
uint64_t count_lines(const Field& F, size_t basis_dim);  // (q^d - 1)/(q - 1), saturating

}  // namespace wcw::modtools
