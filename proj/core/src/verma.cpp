#include "wcw/verma.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "wcw/cache.hpp"

namespace wcw::verma {

namespace {

void mv_add_scaled(const Field& F, std::map<uint64_t, FieldElement>& acc, const ModuleVector& src,
                   const FieldElement& c) {
  if (F.is_zero(c)) return;
  for (const auto& [r, v] : src.terms) {
    auto it = acc.find(r);
    if (it == acc.end())
      acc.emplace(r, F.mul(v, c));
    else
      it->second = F.add(it->second, F.mul(v, c));
  }
}

ModuleVector mv_from_map(const Field& F, std::map<uint64_t, FieldElement>&& acc) {
  ModuleVector out;
  for (auto& [r, v] : acc)
    if (!F.is_zero(v)) out.terms.push_back({r, v});
  return out;
}

}  // namespace

uint32_t monomial_digit(const Witt& W, const InductionDatum& d, uint64_t rank, uint32_t pos) {
  (void)d;
  uint64_t p = W.shape().p;
  for (uint32_t k = 0; k < pos; ++k) rank /= p;
  return static_cast<uint32_t>(rank % p);
}

uint64_t monomial_total_degree(const Witt& W, const InductionDatum& d, uint64_t rank) {
  uint64_t p = W.shape().p, total = 0;
  for (size_t k = 0; k < d.complement.size(); ++k) {
    total += rank % p;
    rank /= p;
  }
  return total;
}

std::string monomial_to_string(const Witt& W, const InductionDatum& d, uint64_t rank) {
  if (rank == 0) return "1";
  std::string s;
  uint64_t p = W.shape().p;
  for (size_t k = 0; k < d.complement.size(); ++k) {
    uint32_t e = static_cast<uint32_t>(rank % p);
    rank /= p;
    if (e == 0) continue;
    BasisIndex b = W.shape().basis(d.complement[k]);
    if (!s.empty()) s += "*";
    s += "e(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

Straightener::Straightener(std::shared_ptr<const Witt> W, InductionDatum datum)
    : W_(std::move(W)), datum_(std::move(datum)) {
  const uint32_t p = W_->shape().p;
  pw_.assign(datum_.complement.size() + 1, 1);
  for (size_t k = 0; k < datum_.complement.size(); ++k) pw_[k + 1] = pw_[k] * p;
  memo_.resize(W_->dim());
}

uint32_t Straightener::digit(uint64_t rank, uint32_t pos) const {
  return static_cast<uint32_t>(rank / pw_[pos] % W_->shape().p);
}

uint32_t Straightener::leading_pos(uint64_t rank) const {
  for (uint32_t k = 0; k < datum_.complement.size(); ++k)
    if (digit(rank, k) > 0) return k;
  fail(Errc::Internal, "leading_pos on empty monomial");
}

const ModuleVector& Straightener::act_basis(uint32_t gen_lin, uint64_t rank) {
  auto& slot = memo_[gen_lin];
  auto it = slot.find(rank);
  if (it != slot.end()) return it->second;
  ModuleVector v = compute(gen_lin, rank);
  return slot.emplace(rank, std::move(v)).first->second;
}

ModuleVector Straightener::compute(uint32_t gen_lin, uint64_t rank) {
  const Field& F = W_->field();
  if (rank == 0) {
    if (datum_.pos_of[gen_lin] < 0) {
      const FieldElement& m = datum_.mu[gen_lin];
      if (F.is_zero(m)) return {};
      return ModuleVector{{{0, m}}};
    }
    return ModuleVector{{{pw_[datum_.pos_of[gen_lin]], F.one()}}};
  }
  const uint32_t k = leading_pos(rank);
  const int32_t gp = datum_.pos_of[gen_lin];
  if (gp >= 0 && static_cast<uint32_t>(gp) <= k) return leftmul_ordered(static_cast<uint32_t>(gp), rank);

  // g.(y m1) = y.(g.m1) + [g,y].m1 with y the leading ordered factor
  const uint64_t m1 = rank - pw_[k];
  const uint32_t y = datum_.complement[k];
  std::map<uint64_t, FieldElement> acc;
  {
    ModuleVector inner = act_basis(gen_lin, m1);  // copy: memo may rehash during recursion
    for (const auto& [r, c] : inner.terms) mv_add_scaled(F, acc, act_basis(y, r), c);
  }
  if (auto br = W_->bracket_basis(gen_lin, y))
    mv_add_scaled(F, acc, act_basis(br->second, m1), F.from_residue(br->first));
  return mv_from_map(F, std::move(acc));
}

ModuleVector Straightener::leftmul_ordered(uint32_t pos, uint64_t rank) {
  const Field& F = W_->field();
  const uint32_t p = W_->shape().p;
  const uint32_t e = digit(rank, pos);
  if (e + 1 < p) return ModuleVector{{{rank + pw_[pos], F.one()}}};

  // y^p reduction: y . y^{p-1} m' = y^[p] m' + chi(y)^p m'
  const uint64_t m2 = rank - static_cast<uint64_t>(e) * pw_[pos];
  const uint32_t y = datum_.complement[pos];
  std::map<uint64_t, FieldElement> acc;
  FieldElement chip = F.zero();
  {
    auto it = datum_.chi.values.find(y);
    if (it != datum_.chi.values.end()) chip = F.pow(it->second, p);
  }
  if (!F.is_zero(chip)) acc.emplace(m2, chip);
  if (auto z = W_->p_map_basis(y)) mv_add_scaled(F, acc, act_basis(*z, m2), F.one());
  return mv_from_map(F, std::move(acc));
}

ModuleVector Straightener::act(uint32_t gen_lin, const ModuleVector& v) {
  const Field& F = W_->field();
  std::map<uint64_t, FieldElement> acc;
  for (const auto& [r, c] : v.terms) mv_add_scaled(F, acc, act_basis(gen_lin, r), c);
  return mv_from_map(F, std::move(acc));
}

ModuleVector Straightener::act(const LieElement& x, const ModuleVector& v) {
  W_->check(x);
  const Field& F = W_->field();
  std::map<uint64_t, FieldElement> acc;
  for (const auto& [lin, c] : x.terms) {
    for (const auto& [r, cv] : v.terms) mv_add_scaled(F, acc, act_basis(lin, r), F.mul(c, cv));
  }
  return mv_from_map(F, std::move(acc));
}

SparseMat Straightener::matrix(uint32_t gen_lin) {
  SparseMat m = SparseMat::zero(static_cast<uint32_t>(datum_.dim), static_cast<uint32_t>(datum_.dim));
  for (uint64_t r = 0; r < datum_.dim; ++r) {
    const ModuleVector& col = act_basis(gen_lin, r);
    m.col[r].reserve(col.terms.size());
    for (const auto& [row, v] : col.terms) m.col[r].push_back({static_cast<uint32_t>(row), v});
  }
  return m;
}

InductionDatum base_scalars(const Witt& W, const PChar& chi, uint32_t cut,
                            const std::optional<FieldElement>& lambda) {
  W.check(chi);
  const Field& F = W.field();
  const uint32_t p = W.shape().p;
  const uint32_t ell = W.shape().ell;

  InductionDatum d;
  d.chi = chi;
  d.cut = cut;
  d.lambda = lambda;
  d.mu.assign(W.dim(), F.zero());

  if (cut == 0) {
    require(W.height(chi) <= 1, Errc::HypothesisViolated,
            "Verma induction needs height(chi) <= 1, got " + std::to_string(W.height(chi)));
    require(lambda.has_value(), Errc::BadLambda, "Verma induction needs lambda");
    F.check(*lambda);
    FieldElement as = F.sub(F.pow(*lambda, p), *lambda);
    require(as == F.pow(W.chi_at(chi, BasisIndex{0, 0}), p), Errc::BadLambda,
            "lambda^p - lambda != chi(e_0)^p: lambda is not in Lambda(chi)");
    d.mu[W.shape().lin(BasisIndex{0, 0})] = *lambda;
    // chi_i by descending recursion: chi_i = pth_root(chi_{ip} + chi(e_0 t^i)^p),
    // chi_{ip} read from mu (zero when ip > ell). Descending keeps chi_{ip}
    // available even when ell >= p.
    for (uint32_t i = ell; i >= 1; --i) {
      FieldElement rhs = F.pow(W.chi_at(chi, BasisIndex{0, i}), p);
      uint64_t ip = static_cast<uint64_t>(i) * p;
      if (ip <= ell)
        rhs = F.add(rhs, d.mu[W.shape().lin(BasisIndex{0, static_cast<uint32_t>(ip)})]);
      d.mu[W.shape().lin(BasisIndex{0, i})] = F.pth_root(rhs);
    }
  } else {
    // k_chi for the height-r module: mu = chi restricted to W_{(s)}. Every
    // basis element there has Witt degree >= 1, hence zero p-map, and
    // mu(x)^p = chi(x)^p forces mu = chi.
    for (const auto& [lin, c] : chi.values) {
      if (W.shape().basis(lin).i >= static_cast<int32_t>(cut)) d.mu[lin] = c;
    }
  }

  // Invariant 1: mu vanishes on the derived subalgebra of W_{(cut)}.
  // Invariant 2: mu(x)^p - mu(x^[p]) = chi(x)^p on the basis of W_{(cut)}.
  std::vector<uint32_t> sub;
  for (int32_t deg = static_cast<int32_t>(cut); deg <= static_cast<int32_t>(p) - 2; ++deg)
    for (uint32_t j = 0; j <= ell; ++j) sub.push_back(W.shape().lin(BasisIndex{deg, j}));
  for (uint32_t a : sub) {
    for (uint32_t b : sub) {
      auto br = W.bracket_basis(a, b);
      if (!br) continue;
      FieldElement v = F.mul_residue(d.mu[br->second], br->first);
      require(F.is_zero(v), Errc::NotOneDim,
              "mu does not vanish on the derived subalgebra of W_(cut)");
    }
  }
  for (uint32_t a : sub) {
    FieldElement lhs = F.pow(d.mu[a], p);
    if (auto z = W.p_map_basis(a)) lhs = F.sub(lhs, d.mu[*z]);
    FieldElement rhs = F.zero();
    if (auto it = chi.values.find(a); it != chi.values.end()) rhs = F.pow(it->second, p);
    require(lhs == rhs, Errc::NotOneDim, "mu(x)^p - mu(x^[p]) != chi(x)^p on W_(cut) basis");
  }

  // Ordered complement: Witt degrees -1..cut-1 ascending, t-powers ascending
  // within a degree.
  for (int32_t deg = -1; deg < static_cast<int32_t>(cut); ++deg)
    for (uint32_t j = 0; j <= ell; ++j) d.complement.push_back(W.shape().lin(BasisIndex{deg, j}));
  d.pos_of.assign(W.dim(), -1);
  for (size_t k = 0; k < d.complement.size(); ++k) d.pos_of[d.complement[k]] = static_cast<int32_t>(k);

  require(d.complement.size() * std::bit_width(static_cast<uint64_t>(p)) <= 40, Errc::TooLarge,
          "PBW monomial rank would overflow the supported range");
  d.dim = 1;
  for (size_t k = 0; k < d.complement.size(); ++k) d.dim *= p;
  require(d.dim <= (1ULL << 22), Errc::TooLarge, "induced module dimension too large");
  return d;
}

std::vector<FieldElement> lambda_set(const Witt& W, const PChar& chi) {
  const Field& F = W.field();
  FieldElement c = F.pow(W.chi_at(chi, BasisIndex{0, 0}), W.shape().p);
  auto roots = F.artin_schreier_roots(c);
  if (roots.empty())
    fail(Errc::NotSplit,
         "Lambda(chi) is empty over " + F.describe() + "; extend field degree by factor p");
  return roots;
}

namespace {

InducedModule finish_build(std::shared_ptr<const Witt> W, InductionDatum&& datum, std::string label,
                           const BuildOptions& opts) {
  InducedModule M;
  M.datum = std::move(datum);
  M.rep.algebra = W;
  M.rep.chi = M.datum.chi;
  M.rep.dim = static_cast<uint32_t>(M.datum.dim);
  M.rep.label = std::move(label);

  std::string key, lam = M.datum.lambda ? W->field().to_string(*M.datum.lambda) : "-";
  bool loaded = false;
  if (!opts.cache_dir.empty()) {
    key = cache::module_key(*W, M.datum.chi, M.datum.cut, lam, M.datum.complement);
    loaded = cache::try_load(opts.cache_dir, key, *W, M.rep.dim, &M.rep.action);
  }
  if (!loaded) {
    Straightener engine(W, M.datum);
    M.rep.action.reserve(W->dim());
    for (uint32_t g = 0; g < W->dim(); ++g) M.rep.action.push_back(engine.matrix(g));
    if (!opts.cache_dir.empty()) cache::store(opts.cache_dir, key, *W, M.rep.action);
  }
  if (opts.verify) assert_module_axioms(M.rep);
  return M;
}

}  // namespace

InducedModule build_verma(std::shared_ptr<const Witt> W, const PChar& chi, const FieldElement& lambda,
                          const BuildOptions& opts) {
  InductionDatum d = base_scalars(*W, chi, 0, lambda);
  std::string label = "Z(" + W->field().to_string(lambda) + ")";
  return finish_build(std::move(W), std::move(d), std::move(label), opts);
}

InducedModule build_height_r(std::shared_ptr<const Witt> W, const PChar& chi, const BuildOptions& opts) {
  int32_t r = W->height(chi);
  require(r > 1, Errc::HypothesisViolated,
          "height-r induction needs r > 1, got r=" + std::to_string(r));
  require(r < static_cast<int32_t>(W->shape().p) - 1, Errc::HypothesisViolated,
          "height-r induction needs r < p-1, got r=" + std::to_string(r));
  FieldElement top = W->chi_at(chi, BasisIndex{r - 1, W->shape().ell});
  require(!W->field().is_zero(top), Errc::HypothesisViolated,
          "height-r induction needs chi(e_{r-1} t^ell) != 0");
  uint32_t s = static_cast<uint32_t>(r) / 2;
  InductionDatum d = base_scalars(*W, chi, s, std::nullopt);
  std::string label = "S(r=" + std::to_string(r) + ")";
  return finish_build(std::move(W), std::move(d), std::move(label), opts);
}

void assert_module_axioms(const ModuleRep& rep) {
  const Witt& W = rep.W();
  const Field& F = rep.field();
  const uint32_t n = W.dim();
  require(rep.action.size() == n, Errc::Internal, "module is missing action matrices");

  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = a + 1; b < n; ++b) {
      SparseMat comm = la::sp_sub(F, la::sp_mul(F, rep.action[a], rep.action[b]),
                                  la::sp_mul(F, rep.action[b], rep.action[a]));
      SparseMat expect = SparseMat::zero(rep.dim, rep.dim);
      if (auto br = W.bracket_basis(a, b))
        expect = la::sp_scale(F, rep.action[br->second], F.from_residue(br->first));
      if (!la::sp_equal(comm, expect)) {
        BasisIndex ba = W.shape().basis(a), bb = W.shape().basis(b);
        fail(Errc::ConditionFailed,
             "bracket compatibility fails on [e(" + std::to_string(ba.i) + "," + std::to_string(ba.j) +
                 "), e(" + std::to_string(bb.i) + "," + std::to_string(bb.j) + ")] in " + rep.label);
      }
    }
  }
  for (uint32_t a = 0; a < n; ++a) {
    SparseMat lhs = la::sp_pow(F, rep.action[a], W.shape().p);
    if (auto z = W.p_map_basis(a)) lhs = la::sp_sub(F, lhs, rep.action[*z]);
    FieldElement chip = F.pow(W.chi_at(rep.chi, W.shape().basis(a)), W.shape().p);
    SparseMat rhs = la::sp_scale(F, SparseMat::identity(F, rep.dim), chip);
    if (!la::sp_equal(lhs, rhs)) {
      BasisIndex ba = W.shape().basis(a);
      fail(Errc::ConditionFailed,
           "p-th power identity fails on e(" + std::to_string(ba.i) + "," + std::to_string(ba.j) +
               ") in " + rep.label);
    }
  }
}

bool verma_weights_diagonal(const InducedModule& M, std::string* detail) {
  require(M.datum.cut == 0, Errc::HypothesisViolated, "weight check applies to Verma modules only");
  const Witt& W = M.W();
  const Field& F = M.field();
  const SparseMat& e0 = M.rep.action[W.shape().lin(BasisIndex{0, 0})];
  for (uint32_t c = 0; c < M.dim(); ++c) {
    uint64_t deg = monomial_total_degree(W, M.datum, c);
    FieldElement want = F.sub(*M.datum.lambda, F.from_residue(deg));
    bool ok;
    if (F.is_zero(want))
      ok = e0.col[c].empty();
    else
      ok = e0.col[c].size() == 1 && e0.col[c][0].first == c && e0.col[c][0].second == want;
    if (!ok) {
      if (detail)
        *detail = "rho(e_0) not diagonal with weight lambda-|m| on monomial " +
                  monomial_to_string(W, M.datum, c);
      return false;
    }
  }
  return true;
}

StradeRecord strade_elements(const Witt& W, const PChar& chi, uint32_t k) {
  const Field& F = W.field();
  const uint32_t p = W.shape().p;
  const uint32_t ell = W.shape().ell;
  int32_t r = W.height(chi);
  require(r > 1 && r < static_cast<int32_t>(p) - 1, Errc::HypothesisViolated,
          "element construction needs 1 < r < p-1");
  FieldElement top = W.chi_at(chi, BasisIndex{r - 1, ell});
  require(!F.is_zero(top), Errc::HypothesisViolated, "needs chi(e_{r-1} t^ell) != 0");
  uint32_t s = static_cast<uint32_t>(r) / 2;
  require(k <= s, Errc::OutOfRange, "k must satisfy 0 <= k <= s");

  FieldElement top_inv = F.inv(top);
  std::vector<FieldElement> b(ell, F.zero());  // b_i = -chi(e_{r-1} t^i) / chi(e_{r-1} t^ell)
  for (uint32_t i = 0; i < ell; ++i)
    b[i] = F.neg(F.mul(W.chi_at(chi, BasisIndex{r - 1, i}), top_inv));

  StradeRecord rec;
  rec.k = k;
  rec.r = static_cast<uint32_t>(r);
  for (uint32_t j = 0; j <= ell; ++j) {
    LieElement y = W.basis_element(BasisIndex{r - static_cast<int32_t>(k), ell - j});
    for (uint32_t i = 0; i < j; ++i) y = W.add(y, W.scale(rec.ys[i], b[ell - j + i]));
    rec.ys.push_back(y);
  }

  // (1) chi([e_{k-1} t^i, y_{k,j}]) is (r+1-2k) chi(e_{r-1} t^ell) on the
  //     diagonal and 0 off it.
  rec.diagonal_value = F.mul_residue(top, (r + 1 - 2 * k) % p);
  rec.cond1 = true;
  for (uint32_t i = 0; i <= ell && rec.cond1; ++i) {
    LieElement ei = W.basis_element(BasisIndex{static_cast<int32_t>(k) - 1, i});
    for (uint32_t j = 0; j <= ell; ++j) {
      FieldElement v = W.chi_eval(chi, W.bracket(ei, rec.ys[j]));
      if (i == j ? (v != rec.diagonal_value || F.is_zero(v)) : !F.is_zero(v)) {
        rec.cond1 = false;
        break;
      }
    }
  }

  // (2) [e_{k-1} t^i, y_{k,j}] and its bracket with e_{k-1} t^l stay in W_{(k)}.
  auto in_filtration = [&](const LieElement& x, int32_t level) {
    for (const auto& [lin, c] : x.terms) {
      (void)c;
      if (W.shape().basis(lin).i < level) return false;
    }
    return true;
  };
  rec.cond2 = true;
  for (uint32_t i = 0; i <= ell && rec.cond2; ++i) {
    LieElement ei = W.basis_element(BasisIndex{static_cast<int32_t>(k) - 1, i});
    for (uint32_t j = 0; j <= ell && rec.cond2; ++j) {
      LieElement br = W.bracket(ei, rec.ys[j]);
      if (!in_filtration(br, static_cast<int32_t>(k))) rec.cond2 = false;
      for (uint32_t l = 0; l <= ell; ++l) {
        LieElement el = W.basis_element(BasisIndex{static_cast<int32_t>(k) - 1, l});
        if (!in_filtration(W.bracket(br, el), static_cast<int32_t>(k))) {
          rec.cond2 = false;
          break;
        }
      }
    }
  }

  // (3) chi vanishes on [W_(k), W_(r-k)] + [r, r], with r the subalgebra
  //     generated by W_(r-k) and the brackets from (1). The span is grown to
  //     bracket closure and chi is checked on a spanning set of brackets.
  std::vector<LieElement> gens;
  for (BasisIndex bi : W.filtration(r - static_cast<int32_t>(k))) gens.push_back(W.basis_element(bi));
  for (uint32_t i = 0; i <= ell; ++i) {
    LieElement ei = W.basis_element(BasisIndex{static_cast<int32_t>(k) - 1, i});
    for (uint32_t j = 0; j <= ell; ++j) gens.push_back(W.bracket(ei, rec.ys[j]));
  }
  la::EchelonBasis span(F, W.dim());
  std::vector<LieElement> basis_elems;
  auto insert_elem = [&](const LieElement& x) {
    la::FlatVec v = la::FlatVec::zero(F, W.dim());
    for (const auto& [lin, c] : x.terms) la::vk::set(F, v, lin, c);
    if (auto stored = span.insert(std::move(v))) {
      LieElement canon = W.zero_element();
      for (uint32_t i = 0; i < W.dim(); ++i) {
        FieldElement c = la::vk::get(F, *stored, i);
        if (!F.is_zero(c)) canon.terms.push_back({i, c});
      }
      basis_elems.push_back(canon);
      return true;
    }
    return false;
  };
  for (const auto& g : gens) insert_elem(g);
  for (size_t i = 0; i < basis_elems.size(); ++i)
    for (size_t j = 0; j < basis_elems.size(); ++j) insert_elem(W.bracket(basis_elems[i], basis_elems[j]));

  rec.cond3 = true;
  for (BasisIndex bi : W.filtration(static_cast<int32_t>(k))) {
    for (BasisIndex bj : W.filtration(r - static_cast<int32_t>(k))) {
      if (!F.is_zero(W.chi_eval(chi, W.bracket(W.basis_element(bi), W.basis_element(bj))))) {
        rec.cond3 = false;
        break;
      }
    }
    if (!rec.cond3) break;
  }
  for (size_t i = 0; i < basis_elems.size() && rec.cond3; ++i)
    for (size_t j = 0; j < basis_elems.size(); ++j)
      if (!F.is_zero(W.chi_eval(chi, W.bracket(basis_elems[i], basis_elems[j])))) {
        rec.cond3 = false;
        break;
      }

  if (!rec.cond1) fail(Errc::ConditionFailed, "condition (1) failed for k=" + std::to_string(k));
  if (!rec.cond2) fail(Errc::ConditionFailed, "condition (2) failed for k=" + std::to_string(k));
  if (!rec.cond3) fail(Errc::ConditionFailed, "condition (3) failed for k=" + std::to_string(k));
  return rec;
}

la::FlatVec to_flat(const Field& F, const ModuleVector& v, uint32_t dim) {
  la::FlatVec out = la::FlatVec::zero(F, dim);
  for (const auto& [r, c] : v.terms) la::vk::set(F, out, static_cast<uint32_t>(r), c);
  return out;
}

ModuleVector from_flat(const Field& F, const la::FlatVec& v) {
  ModuleVector out;
  for (uint32_t i = 0; i < v.n; ++i) {
    FieldElement c = la::vk::get(F, v, i);
    if (!F.is_zero(c)) out.terms.push_back({i, c});
  }
  return out;
}

}  // namespace wcw::verma
