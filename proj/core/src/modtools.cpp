#include "wcw/modtools.hpp"

#include <algorithm>
#include <map>

#include "wcw/rng.hpp"

namespace wcw::modtools {

using la::EchelonBasis;
using la::SparseMat;
namespace vk = la::vk;

std::string irr_tag_name(IrrTag t) {
  switch (t) {
    case IrrTag::Irreducible: return "Irreducible";
    case IrrTag::ReducibleWithWitness: return "ReducibleWithWitness";
    case IrrTag::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

Subspace spin_with(const Field& F, const std::vector<SparseMat>& mats, uint32_t dim,
                   const std::vector<FlatVec>& seeds) {
  EchelonBasis e(F, dim);
  std::vector<FlatVec> work;
  for (const auto& s : seeds)
    if (auto stored = e.insert(s)) work.push_back(std::move(*stored));
  for (size_t i = 0; i < work.size(); ++i) {
    for (const auto& m : mats) {
      FlatVec w = la::sp_apply(F, m, work[i]);
      if (auto stored = e.insert(std::move(w))) work.push_back(std::move(*stored));
    }
    if (e.rank() == dim) break;  // already everything
  }
  return Subspace::from_echelon(e);
}

std::string subspace_signature(const Subspace& s) {
  std::string sig;
  for (auto p : s.pivots) sig += std::to_string(p) + ";";
  sig += "|";
  for (const auto& r : s.rows)
    for (auto x : r.s) sig += std::to_string(x) + ",";
  return sig;
}

}  // namespace

Subspace spin(const ModuleRep& M, const std::vector<FlatVec>& seeds) {
  return spin_with(M.field(), M.action, M.dim, seeds);
}

Subspace spin_dual(const ModuleRep& M, const std::vector<FlatVec>& seeds) {
  std::vector<SparseMat> t;
  t.reserve(M.action.size());
  for (const auto& a : M.action) t.push_back(la::sp_transpose(a));
  return spin_with(M.field(), t, M.dim, seeds);
}

uint64_t count_lines(const Field& F, size_t basis_dim) {
  uint64_t q = 1;
  // (q^d - 1)/(q - 1) = 1 + q + ... + q^{d-1}, saturating
  uint64_t total = 0, term = 1;
  q = F.order();
  for (size_t i = 0; i < basis_dim; ++i) {
    if (total > (1ULL << 62) || term > (1ULL << 62)) return UINT64_MAX;
    total += term;
    if (i + 1 < basis_dim) {
      if (term > (1ULL << 62) / q) return UINT64_MAX;
      term *= q;
    }
  }
  return total;
}

std::vector<FlatVec> enumerate_lines(const Field& F, const std::vector<FlatVec>& basis, uint64_t cap) {
  uint64_t total = count_lines(F, basis.size());
  require(total <= cap, Errc::TooLarge,
          "line enumeration of size " + std::to_string(total) + " exceeds cap");
  std::vector<FlatVec> out;
  out.reserve(total);
  const uint64_t q = F.order();
  const size_t k = basis.size();
  for (size_t i = 0; i < k; ++i) {
    uint64_t combos = 1;
    for (size_t j = i + 1; j < k; ++j) combos *= q;
    for (uint64_t t = 0; t < combos; ++t) {
      FlatVec v = basis[i];
      uint64_t tt = t;
      for (size_t j = i + 1; j < k; ++j) {
        FieldElement c = F.element_at(tt % q);
        tt /= q;
        if (!F.is_zero(c)) vk::axpy(F, v, basis[j], c);
      }
      vk::normalize(F, v);
      out.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

la::DenseMat sample_combo(const ModuleRep& M, Rng& rng) {
  const Field& F = M.field();
  uint64_t coeff_range = std::min<uint64_t>(F.order() - 1, 1u << 20);
  la::DenseMat acc = la::DenseMat::zero(F, M.dim, M.dim);
  uint32_t nterms = 1 + static_cast<uint32_t>(rng.below(3));
  for (uint32_t t = 0; t < nterms; ++t) {
    uint32_t len = 1 + static_cast<uint32_t>(rng.below(3));
    SparseMat prod = M.action[rng.below(M.action.size())];
    for (uint32_t f = 1; f < len; ++f)
      prod = la::sp_mul(F, prod, M.action[rng.below(M.action.size())]);
    FieldElement c = F.element_at(1 + rng.below(coeff_range));
    la::dm_add_scaled_sparse(F, acc, prod, c);
  }
  return acc;
}

la::DenseMat shifted(const Field& F, const la::DenseMat& T, const FieldElement& c) {
  la::DenseMat out = T;
  FieldElement mc = F.neg(c);
  if (!F.is_zero(mc)) {
    for (uint32_t i = 0; i < out.rows; ++i) {
      la::vk::add_scaled_at(F, out.row[i], i, mc, F.one());
      la::vk::normalize(F, out.row[i]);
    }
  }
  return out;
}

// Kernel lines of an operator given by dense rows; empty when nonsingular.
std::vector<FlatVec> kernel_basis(const Field& F, const la::DenseMat& theta) {
  EchelonBasis e(F, theta.cols);
  for (const auto& r : theta.row) e.insert(r);
  if (e.rank() == theta.cols) return {};
  return e.nullspace();
}

}  // namespace

IrrVerdict is_irreducible(const ModuleRep& M, uint64_t seed) {
  require(M.dim > 0, Errc::Internal, "irreducibility of a zero module");
  IrrVerdict v;
  v.seed = seed;
  if (M.dim == 1) {
    v.tag = IrrTag::Irreducible;
    return v;
  }
  const Field& F = M.field();
  Rng rng(seed);

  constexpr uint32_t kThetaBudget = 16;   // random T draws
  constexpr uint32_t kNullityAccept = 2;  // stop sampling at or below this nullity
  constexpr uint64_t kLineCap = 1u << 20;

  // Sample T from the action algebra, then sweep scalar shifts T - cI (the
  // empty product): any singular sample is admissible for the criterion, the
  // sweep just looks for a small kernel so that few lines need spinning.
  std::optional<la::DenseMat> chosen;
  std::vector<FlatVec> chosen_ker;
  const uint64_t q = F.order();
  for (uint32_t tdraw = 0; tdraw < kThetaBudget; ++tdraw) {
    la::DenseMat T = sample_combo(M, rng);
    std::vector<FieldElement> shifts;
    if (q <= 64) {
      for (uint64_t c = 0; c < q; ++c) shifts.push_back(F.element_at(c));
    } else {
      shifts.push_back(F.zero());
      for (uint32_t t = 0; t < 16; ++t) shifts.push_back(F.element_at(rng.below(q)));
    }
    for (const auto& c : shifts) {
      la::DenseMat theta = shifted(F, T, c);
      if (la::dm_is_zero(F, theta)) continue;
      ++v.theta_samples;
      std::vector<FlatVec> ker = kernel_basis(F, theta);
      if (ker.empty()) continue;
      if (!chosen || ker.size() < chosen_ker.size()) {
        chosen = std::move(theta);
        chosen_ker = std::move(ker);
      }
      if (chosen_ker.size() <= kNullityAccept) break;
    }
    if (chosen && chosen_ker.size() <= kNullityAccept) break;
  }
  if (!chosen) {
    v.tag = IrrTag::Inconclusive;  // every sample was invertible; never misreported
    return v;
  }
  const la::DenseMat& theta = *chosen;

  auto test_side = [&](const std::vector<FlatVec>& kbasis, bool dual) -> std::optional<Subspace> {
    auto spin_one = [&](const FlatVec& vec) { return dual ? spin_dual(M, {vec}) : spin(M, {vec}); };
    if (count_lines(F, kbasis.size()) <= kLineCap && F.order() <= 3125) {
      for (const auto& line : enumerate_lines(F, kbasis, kLineCap)) {
        Subspace S = spin_one(line);
        if (S.dim() < M.dim) return S;
      }
    } else {
      // Large field/kernel: spin the kernel as a whole plus 32 random kernel vectors.
      Subspace S = dual ? spin_dual(M, kbasis) : spin(M, kbasis);
      if (S.dim() < M.dim) return S;
      for (uint32_t t = 0; t < 32; ++t) {
        FlatVec vec = FlatVec::zero(F, M.dim);
        bool nonzero = false;
        for (const auto& kb : kbasis) {
          FieldElement c = F.element_at(rng.below(F.order()));
          if (!F.is_zero(c)) nonzero = true;
          vk::axpy(F, vec, kb, c);
        }
        if (!nonzero) continue;
        vk::normalize(F, vec);
        Subspace Sv = spin_one(vec);
        if (Sv.dim() < M.dim) return Sv;
      }
    }
    return std::nullopt;
  };

  if (auto S = test_side(chosen_ker, false)) {
    v.tag = IrrTag::ReducibleWithWitness;
    v.witness = std::move(*S);
    return v;
  }
  la::DenseMat thetaT = la::dm_transpose(F, theta);
  std::vector<FlatVec> kerT = kernel_basis(F, thetaT);
  require(!kerT.empty(), Errc::Internal, "theta^T nonsingular while theta singular");
  if (auto S = test_side(kerT, true)) {
    // Dual witness: the perp is an invariant subspace of M itself.
    Subspace W = la::perp(F, *S);
    for (const auto& m : M.action)
      for (const auto& row : W.rows)
        require(W.contains(F, la::sp_apply(F, m, row)), Errc::Internal,
                "dual witness perp is not invariant");
    v.tag = IrrTag::ReducibleWithWitness;
    v.witness = std::move(W);
    return v;
  }
  v.tag = IrrTag::Irreducible;
  return v;
}

namespace {

SparseMat sparse_from_dense(const Field& F, const la::DenseMat& d) {
  SparseMat m = SparseMat::zero(d.rows, d.cols);
  for (uint32_t i = 0; i < d.rows; ++i)
    for (uint32_t j = 0; j < d.cols; ++j) {
      FieldElement v = vk::get(F, d.row[i], j);
      if (!F.is_zero(v)) m.col[j].push_back({i, v});
    }
  return m;
}

void check_same_chi(const ModuleRep& M, const ModuleRep& N) {
  require(M.algebra->shape().id() == N.algebra->shape().id(), Errc::ShapeMismatch,
          "modules over different algebra shapes");
  require(M.chi.values == N.chi.values, Errc::ShapeMismatch, "modules with different p-characters");
}

}  // namespace

ModuleMorphismSpace hom_space(const ModuleRep& M, const ModuleRep& N, uint64_t bound) {
  check_same_chi(M, N);
  const Field& F = M.field();
  const uint64_t unknowns = static_cast<uint64_t>(M.dim) * N.dim;
  require(unknowns <= bound, Errc::TooLarge,
          "hom system with " + std::to_string(unknowns) +
              " unknowns exceeds the configured bound; use the intertwiner-candidate path");

  const uint32_t dM = M.dim, dN = N.dim;
  EchelonBasis sys(F, static_cast<uint32_t>(unknowns));
  // Phi(a, c) at flat index a*dM + c; constraints Phi rho_M(g) = rho_N(g) Phi,
  // one generator block at a time with incremental elimination.
  for (size_t g = 0; g < M.action.size(); ++g) {
    const SparseMat& Mg = M.action[g];
    SparseMat NgT = la::sp_transpose(N.action[g]);
    for (uint32_t b = 0; b < dM; ++b) {
      for (uint32_t a = 0; a < dN; ++a) {
        FlatVec row = FlatVec::zero(F, static_cast<uint32_t>(unknowns));
        bool any = false;
        for (const auto& [c, val] : Mg.col[b]) {
          vk::add_scaled_at(F, row, a * dM + c, val, F.one());
          any = true;
        }
        for (const auto& [r, val] : NgT.col[a]) {
          vk::add_scaled_at(F, row, r * dM + b, F.neg(val), F.one());
          any = true;
        }
        if (!any) continue;
        vk::normalize(F, row);
        sys.insert(std::move(row));
      }
    }
  }

  ModuleMorphismSpace out;
  std::vector<FlatVec> null = sys.nullspace();
  out.dimension = static_cast<uint32_t>(null.size());
  for (const auto& x : null) {
    la::DenseMat phi = la::DenseMat::zero(F, dN, dM);
    for (uint32_t a = 0; a < dN; ++a)
      for (uint32_t c = 0; c < dM; ++c) vk::set(F, phi.row[a], c, vk::get(F, x, a * dM + c));
    // exact intertwining check on every generator before returning
    SparseMat phis = sparse_from_dense(F, phi);
    for (size_t g = 0; g < M.action.size(); ++g) {
      require(la::sp_equal(la::sp_mul(F, phis, M.action[g]), la::sp_mul(F, N.action[g], phis)),
              Errc::Internal, "hom-space basis matrix fails to intertwine");
    }
    out.basis.push_back(std::move(phi));
  }
  return out;
}

IntertwinerResult intertwiner_candidate(const InducedModule& Zlambda, const InducedModule& Zmu) {
  IntertwinerResult res;
  check_same_chi(Zlambda.rep, Zmu.rep);
  require(Zlambda.datum.cut == 0 && Zmu.datum.cut == 0, Errc::HypothesisViolated,
          "intertwiner candidate applies to Verma modules");
  const witt::Witt& W = Zlambda.W();
  const Field& F = Zlambda.field();
  const uint32_t p = W.shape().p;
  const uint32_t ell = W.shape().ell;

  FieldElement top = W.chi_at(Zlambda.rep.chi, witt::BasisIndex{0, ell});
  if (!F.is_zero(top)) {
    res.reason = "chi(e_0 t^ell) != 0: candidate vector is not a mu-eigenvector here";
    return res;
  }
  FieldElement lam = *Zlambda.datum.lambda, mu = *Zmu.datum.lambda;
  FieldElement diff = F.sub(lam, mu);
  if (!F.in_prime_subfield(diff)) {
    res.reason = "lambda - mu is not in the prime field";
    return res;
  }
  uint32_t n = diff.c[0];  // [lambda - mu], minimal natural representative

  // w = (e_{-1} t^ell)^{[lambda-mu]} (x) v_lambda: exponent n on the last
  // complement factor.
  uint64_t pw_last = 1;
  for (uint32_t k = 0; k + 1 < Zlambda.datum.complement.size(); ++k) pw_last *= p;
  uint64_t wrank = static_cast<uint64_t>(n) * pw_last;
  FlatVec w = FlatVec::zero(F, Zlambda.dim());
  vk::set(F, w, static_cast<uint32_t>(wrank), F.one());

  // Annihilation conditions: every generator of W_{(0)} must act on w by the
  // scalar it takes on v_mu (e_0 by mu, e_0 t^j by chi_j, the rest by 0).
  for (uint32_t g = 0; g < W.dim(); ++g) {
    if (W.shape().basis(g).i < 0) continue;
    FlatVec got = la::sp_apply(F, Zlambda.rep.action[g], w);
    FlatVec want = w;
    vk::scale(F, want, Zmu.datum.mu[g]);
    if (!vk::equal(F, got, want)) {
      witt::BasisIndex b = W.shape().basis(g);
      res.reason = "annihilation check failed on e(" + std::to_string(b.i) + "," +
                   std::to_string(b.j) + ")";
      return res;
    }
  }

  // Extend v_mu -> w by equivariance along the PBW order.
  la::DenseMat cols = la::DenseMat::zero(F, Zmu.dim(), Zlambda.dim());  // column r in row r (transposed store)
  std::vector<uint64_t> pw(Zmu.datum.complement.size() + 1, 1);
  for (size_t k = 0; k < Zmu.datum.complement.size(); ++k) pw[k + 1] = pw[k] * p;
  cols.row[0] = w;
  for (uint64_t r = 1; r < Zmu.dim(); ++r) {
    uint32_t k = 0;
    while (r / pw[k] % p == 0) ++k;
    uint64_t r1 = r - pw[k];
    cols.row[r] = la::sp_apply(F, Zlambda.rep.action[Zmu.datum.complement[k]], cols.row[r1]);
  }
  la::DenseMat phi = la::dm_transpose(F, cols);  // dim(Zlambda) x dim(Zmu)

  SparseMat phis = sparse_from_dense(F, phi);
  for (uint32_t g = 0; g < W.dim(); ++g) {
    require(la::sp_equal(la::sp_mul(F, phis, Zmu.rep.action[g]),
                         la::sp_mul(F, Zlambda.rep.action[g], phis)),
            Errc::Internal, "equivariant extension fails to intertwine");
  }
  res.applicable = true;
  res.phi = std::move(phi);
  return res;
}

SocleInfo socle_and_maximal(const ModuleRep& M) {
  const Field& F = M.field();
  require(M.dim <= 32, Errc::TooLarge, "exhaustive submodule search needs dim <= 32");
  std::vector<FlatVec> std_basis;
  for (uint32_t i = 0; i < M.dim; ++i) {
    FlatVec e = FlatVec::zero(F, M.dim);
    vk::set(F, e, i, F.one());
    std_basis.push_back(std::move(e));
  }
  // All cyclic submodules, deduplicated by canonical echelon signature.
  std::map<std::string, Subspace> distinct;
  for (const auto& line : enumerate_lines(F, std_basis, 1u << 20)) {
    Subspace S = spin(M, {line});
    distinct.emplace(subspace_signature(S), S);
  }
  // Every submodule is a sum of cyclic ones: close under joins.
  std::vector<Subspace> subs;
  for (auto& [sig, s] : distinct) subs.push_back(s);
  std::map<std::string, size_t> seen;
  for (size_t i = 0; i < subs.size(); ++i) seen[subspace_signature(subs[i])] = i;
  for (size_t i = 0; i < subs.size(); ++i) {
    for (size_t j = i + 1; j < subs.size(); ++j) {
      Subspace J = la::join(F, subs[i], subs[j]);
      std::string sig = subspace_signature(J);
      if (!seen.count(sig)) {
        require(subs.size() < 4096, Errc::TooLarge, "submodule lattice too large to close");
        seen[sig] = subs.size();
        subs.push_back(std::move(J));
      }
    }
  }
  Subspace zero;
  zero.ncols = M.dim;
  subs.push_back(zero);

  auto strictly_below = [&](const Subspace& a, const Subspace& b) {
    if (a.dim() >= b.dim()) return false;
    for (const auto& r : a.rows)
      if (!b.contains(F, r)) return false;
    return true;
  };

  SocleInfo info;
  for (const auto& s : subs) info.submodule_dims.push_back(s.dim());
  std::sort(info.submodule_dims.begin(), info.submodule_dims.end());

  // socle: join of minimal nonzero submodules
  Subspace socle = zero;
  for (const auto& s : subs) {
    if (s.dim() == 0) continue;
    bool minimal = true;
    for (const auto& t : subs) {
      if (t.dim() == 0) continue;
      if (strictly_below(t, s)) {
        minimal = false;
        break;
      }
    }
    if (minimal) socle = la::join(F, socle, s);
  }
  info.socle = std::move(socle);

  // radical: intersection of maximal proper submodules
  bool first = true;
  Subspace rad;
  for (const auto& s : subs) {
    if (s.dim() >= M.dim) continue;
    bool maximal = true;
    for (const auto& t : subs) {
      if (t.dim() >= M.dim) continue;
      if (strictly_below(s, t)) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    info.maximal_dims.push_back(s.dim());
    if (first) {
      rad = s;
      first = false;
    } else {
      rad = la::intersect(F, rad, s);
    }
  }
  std::sort(info.maximal_dims.begin(), info.maximal_dims.end());
  if (first) rad = zero;  // no proper submodule at all (dim 0 module)
  info.radical = std::move(rad);
  return info;
}

ModuleRep quotient(const ModuleRep& M, const Subspace& S, const std::string& label) {
  const Field& F = M.field();
  require(S.ncols == M.dim, Errc::ShapeMismatch, "subspace over a different coordinate space");
  require(S.dim() < M.dim, Errc::ZeroQuotient, "quotient by the full space is the zero module");
  for (const auto& m : M.action)
    for (const auto& row : S.rows)
      require(S.contains(F, la::sp_apply(F, m, row)), Errc::NotInvariant,
              "subspace is not invariant under the generator actions");

  std::vector<uint32_t> comp;  // complement coordinates: non-pivot columns
  {
    std::vector<bool> is_pivot(M.dim, false);
    for (auto p : S.pivots) is_pivot[p] = true;
    for (uint32_t c = 0; c < M.dim; ++c)
      if (!is_pivot[c]) comp.push_back(c);
  }
  const uint32_t qdim = static_cast<uint32_t>(comp.size());

  auto project = [&](FlatVec v) {
    // reduce modulo S, then read complement coordinates
    for (size_t k = 0; k < S.rows.size(); ++k) {
      FieldElement val = vk::get(F, v, S.pivots[k]);
      if (F.is_zero(val)) continue;
      vk::axpy(F, v, S.rows[k], F.neg(val));
    }
    vk::normalize(F, v);
    FlatVec out = FlatVec::zero(F, qdim);
    for (uint32_t c = 0; c < qdim; ++c) vk::set(F, out, c, vk::get(F, v, comp[c]));
    return out;
  };

  ModuleRep Q;
  Q.algebra = M.algebra;
  Q.chi = M.chi;
  Q.dim = qdim;
  Q.label = label;
  for (const auto& m : M.action) {
    SparseMat qa = SparseMat::zero(qdim, qdim);
    for (uint32_t c = 0; c < qdim; ++c) {
      FlatVec unit = FlatVec::zero(F, M.dim);
      vk::set(F, unit, comp[c], F.one());
      FlatVec img = project(la::sp_apply(F, m, unit));
      for (uint32_t r = 0; r < qdim; ++r) {
        FieldElement v = vk::get(F, img, r);
        if (!F.is_zero(v)) qa.col[c].push_back({r, v});
      }
    }
    Q.action.push_back(std::move(qa));
  }
  verma::assert_module_axioms(Q);
  return Q;
}

}  // namespace wcw::modtools
