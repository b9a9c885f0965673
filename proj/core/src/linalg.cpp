#include "wcw/linalg.hpp"

#include <algorithm>

namespace wcw::la {

FlatVec FlatVec::zero(const Field& F, uint32_t n) {
  FlatVec v;
  v.n = n;
  v.m = F.degree();
  v.s.assign(static_cast<size_t>(n) * v.m, 0);
  return v;
}

namespace vk {

void normalize(const Field& F, FlatVec& v) {
  const uint64_t p = F.p();
  for (auto& x : v.s) x %= p;
}

FieldElement get(const Field& F, const FlatVec& v, uint32_t i) {
  FieldElement e;
  e.fid = F.fid();
  const uint64_t p = F.p();
  const size_t base = static_cast<size_t>(i) * v.m;
  for (uint32_t k = 0; k < v.m; ++k) e.c[k] = static_cast<uint16_t>(v.s[base + k] % p);
  return e;
}

void set(const Field& F, FlatVec& v, uint32_t i, const FieldElement& e) {
  F.check(e);
  const size_t base = static_cast<size_t>(i) * v.m;
  for (uint32_t k = 0; k < v.m; ++k) v.s[base + k] = e.c[k];
}

void add_scaled_at(const Field& F, FlatVec& v, uint32_t i, const FieldElement& a,
                   const FieldElement& b) {
  const uint32_t m = v.m;
  const size_t base = static_cast<size_t>(i) * m;
  if (m == 1) {
    v.s[base] += static_cast<uint64_t>(a.c[0]) * b.c[0];
    return;
  }
  const uint64_t p = F.p();
  uint64_t u[2 * gf::kMaxDegree] = {0};
  for (uint32_t x = 0; x < m; ++x) {
    if (a.c[x] == 0) continue;
    for (uint32_t y = 0; y < m; ++y) u[x + y] += static_cast<uint64_t>(a.c[x]) * b.c[y];
  }
  const auto& red = F.reduction_rows();
  for (uint32_t k = 0; k < m; ++k) {
    uint64_t acc = u[k];
    for (uint32_t t = 0; t + 1 < m; ++t) acc += u[m + t] % p * red[t][k];
    v.s[base + k] += acc;
  }
}

bool is_zero(const Field& F, const FlatVec& v) {
  const uint64_t p = F.p();
  for (auto x : v.s)
    if (x % p) return false;
  return true;
}

uint32_t leading(const Field& F, const FlatVec& v, uint32_t from) {
  const uint64_t p = F.p();
  for (uint32_t i = from; i < v.n; ++i) {
    const size_t base = static_cast<size_t>(i) * v.m;
    for (uint32_t k = 0; k < v.m; ++k)
      if (v.s[base + k] % p) return i;
  }
  return v.n;
}

void axpy(const Field& F, FlatVec& dst, const FlatVec& src, const FieldElement& c) {
  const uint32_t m = dst.m;
  if (m == 1) {
    const uint64_t c0 = c.c[0];
    if (c0 == 0) return;
    const size_t n = dst.s.size();
    const uint64_t* __restrict__ s = src.s.data();
    uint64_t* __restrict__ d = dst.s.data();
    for (size_t i = 0; i < n; ++i) d[i] += c0 * s[i];
    return;
  }
  const uint64_t p = F.p();
  const auto& red = F.reduction_rows();
  for (uint32_t i = 0; i < dst.n; ++i) {
    const size_t base = static_cast<size_t>(i) * m;
    uint64_t u[2 * gf::kMaxDegree] = {0};
    bool any = false;
    for (uint32_t x = 0; x < m; ++x) {
      if (c.c[x] == 0) continue;
      for (uint32_t y = 0; y < m; ++y) {
        uint64_t sv = src.s[base + y];
        if (sv) {
          u[x + y] += static_cast<uint64_t>(c.c[x]) * sv;
          any = true;
        }
      }
    }
    if (!any) continue;
    for (uint32_t k = 0; k < m; ++k) {
      uint64_t acc = u[k];
      for (uint32_t t = 0; t + 1 < m; ++t) acc += u[m + t] % p * red[t][k];
      dst.s[base + k] += acc;
    }
  }
}

void scale(const Field& F, FlatVec& v, const FieldElement& c) {
  const uint32_t m = v.m;
  const uint64_t p = F.p();
  if (m == 1) {
    const uint64_t c0 = c.c[0];
    for (auto& x : v.s) x = x * c0 % p;
    return;
  }
  for (uint32_t i = 0; i < v.n; ++i) {
    FieldElement e = get(F, v, i);
    set(F, v, i, F.mul(e, c));
  }
}

FlatVec from_elems(const Field& F, const std::vector<FieldElement>& elems) {
  FlatVec v = FlatVec::zero(F, static_cast<uint32_t>(elems.size()));
  for (uint32_t i = 0; i < v.n; ++i) set(F, v, i, elems[i]);
  return v;
}

std::vector<FieldElement> to_elems(const Field& F, const FlatVec& v) {
  std::vector<FieldElement> out(v.n);
  for (uint32_t i = 0; i < v.n; ++i) out[i] = get(F, v, i);
  return out;
}

bool equal(const Field& F, const FlatVec& a, const FlatVec& b) {
  if (a.n != b.n || a.m != b.m) return false;
  const uint64_t p = F.p();
  for (size_t i = 0; i < a.s.size(); ++i)
    if (a.s[i] % p != b.s[i] % p) return false;
  return true;
}

}  // namespace vk

EchelonBasis::EchelonBasis(const Field& F, uint32_t ncols) : F_(&F), ncols_(ncols) {
  uint64_t g = std::max<uint64_t>(1, F.axpy_growth_bound());
  defer_block_ = std::max<uint64_t>(1, (1ULL << 62) / g);
}

void EchelonBasis::reduce(FlatVec& v) const {
  uint64_t since = 0;
  for (size_t k = 0; k < rows_.size(); ++k) {
    FieldElement val = vk::get(*F_, v, pivots_[k]);
    if (F_->is_zero(val)) continue;
    vk::axpy(*F_, v, rows_[k], F_->neg(val));
    if (++since >= defer_block_) {
      vk::normalize(*F_, v);
      since = 0;
    }
  }
  vk::normalize(*F_, v);
}

std::optional<FlatVec> EchelonBasis::insert(FlatVec v) {
  reduce(v);
  uint32_t lead = vk::leading(*F_, v);
  if (lead == ncols_) return std::nullopt;
  vk::scale(*F_, v, F_->inv(vk::get(*F_, v, lead)));
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
  size_t pos = static_cast<size_t>(it - pivots_.begin());
  pivots_.insert(it, lead);
  rows_.insert(rows_.begin() + pos, v);
  return v;
}

bool EchelonBasis::contains(FlatVec v) const {
  reduce(v);
  return vk::leading(*F_, v) == ncols_;
}

std::vector<FlatVec> EchelonBasis::reduced_rows() const {
  std::vector<FlatVec> rows = rows_;
  for (size_t k = rows.size(); k-- > 0;) {
    for (size_t j = 0; j < k; ++j) {
      FieldElement val = vk::get(*F_, rows[j], pivots_[k]);
      if (F_->is_zero(val)) continue;
      vk::axpy(*F_, rows[j], rows[k], F_->neg(val));
      vk::normalize(*F_, rows[j]);
    }
  }
  return rows;
}

std::vector<FlatVec> EchelonBasis::nullspace() const {
  std::vector<FlatVec> red = reduced_rows();
  std::vector<bool> is_pivot(ncols_, false);
  for (uint32_t p : pivots_) is_pivot[p] = true;
  std::vector<FlatVec> out;
  for (uint32_t f = 0; f < ncols_; ++f) {
    if (is_pivot[f]) continue;
    FlatVec x = FlatVec::zero(*F_, ncols_);
    vk::set(*F_, x, f, F_->one());
    for (size_t k = 0; k < red.size(); ++k)
      vk::set(*F_, x, pivots_[k], F_->neg(vk::get(*F_, red[k], f)));
    out.push_back(std::move(x));
  }
  return out;
}

Subspace Subspace::from_echelon(const EchelonBasis& e) {
  Subspace s;
  s.ncols = e.ncols();
  s.rows = e.reduced_rows();
  s.pivots = e.pivots();
  return s;
}

bool Subspace::contains(const Field& F, const FlatVec& v) const {
  FlatVec r = v;
  vk::normalize(F, r);
  for (size_t k = 0; k < rows.size(); ++k) {
    FieldElement val = vk::get(F, r, pivots[k]);
    if (F.is_zero(val)) continue;
    vk::axpy(F, r, rows[k], F.neg(val));
    vk::normalize(F, r);
  }
  return vk::leading(F, r) == ncols;
}

bool Subspace::operator==(const Subspace& o) const {
  if (ncols != o.ncols || pivots != o.pivots) return false;
  for (size_t k = 0; k < rows.size(); ++k)
    if (rows[k].s != o.rows[k].s) return false;  // rows stored normalized
  return true;
}

Subspace join(const Field& F, const Subspace& a, const Subspace& b) {
  EchelonBasis e(F, a.ncols);
  for (const auto& r : a.rows) e.insert(r);
  for (const auto& r : b.rows) e.insert(r);
  return Subspace::from_echelon(e);
}

Subspace intersect(const Field& F, const Subspace& a, const Subspace& b) {
  const uint32_t da = a.dim(), db = b.dim();
  // Unknowns (alpha, beta) with sum_i alpha_i a_i = sum_j beta_j b_j.
  EchelonBasis sys(F, da + db);
  for (uint32_t c = 0; c < a.ncols; ++c) {
    FlatVec row = FlatVec::zero(F, da + db);
    bool any = false;
    for (uint32_t i = 0; i < da; ++i) {
      FieldElement v = vk::get(F, a.rows[i], c);
      if (!F.is_zero(v)) {
        vk::set(F, row, i, v);
        any = true;
      }
    }
    for (uint32_t j = 0; j < db; ++j) {
      FieldElement v = vk::get(F, b.rows[j], c);
      if (!F.is_zero(v)) {
        vk::set(F, row, da + j, F.neg(v));
        any = true;
      }
    }
    if (any) sys.insert(std::move(row));
  }
  EchelonBasis out(F, a.ncols);
  for (const auto& k : sys.nullspace()) {
    FlatVec v = FlatVec::zero(F, a.ncols);
    for (uint32_t i = 0; i < da; ++i) {
      FieldElement c = vk::get(F, k, i);
      if (!F.is_zero(c)) vk::axpy(F, v, a.rows[i], c);
    }
    vk::normalize(F, v);
    out.insert(std::move(v));
  }
  return Subspace::from_echelon(out);
}

Subspace perp(const Field& F, const Subspace& a) {
  EchelonBasis sys(F, a.ncols);
  for (const auto& r : a.rows) sys.insert(r);
  EchelonBasis out(F, a.ncols);
  for (auto& k : sys.nullspace()) out.insert(std::move(k));
  return Subspace::from_echelon(out);
}

SparseMat SparseMat::zero(uint32_t r, uint32_t c) {
  SparseMat m;
  m.rows = r;
  m.cols = c;
  m.col.resize(c);
  return m;
}

SparseMat SparseMat::identity(const Field& F, uint32_t n) {
  SparseMat m = zero(n, n);
  for (uint32_t j = 0; j < n; ++j) m.col[j].push_back({j, F.one()});
  return m;
}

namespace {

std::vector<std::pair<uint32_t, FieldElement>> merge_cols(
    const Field& F, const std::vector<std::pair<uint32_t, FieldElement>>& a,
    const std::vector<std::pair<uint32_t, FieldElement>>& b, bool subtract) {
  std::vector<std::pair<uint32_t, FieldElement>> out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back({b[j].first, subtract ? F.neg(b[j].second) : b[j].second});
      ++j;
    } else {
      FieldElement v = subtract ? F.sub(a[i].second, b[j].second) : F.add(a[i].second, b[j].second);
      if (!F.is_zero(v)) out.push_back({a[i].first, v});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SparseMat sp_add(const Field& F, const SparseMat& a, const SparseMat& b) {
  require(a.rows == b.rows && a.cols == b.cols, Errc::ShapeMismatch, "sparse add shape");
  SparseMat out = SparseMat::zero(a.rows, a.cols);
  for (uint32_t j = 0; j < a.cols; ++j) out.col[j] = merge_cols(F, a.col[j], b.col[j], false);
  return out;
}

SparseMat sp_sub(const Field& F, const SparseMat& a, const SparseMat& b) {
  require(a.rows == b.rows && a.cols == b.cols, Errc::ShapeMismatch, "sparse sub shape");
  SparseMat out = SparseMat::zero(a.rows, a.cols);
  for (uint32_t j = 0; j < a.cols; ++j) out.col[j] = merge_cols(F, a.col[j], b.col[j], true);
  return out;
}

SparseMat sp_scale(const Field& F, const SparseMat& a, const FieldElement& c) {
  SparseMat out = SparseMat::zero(a.rows, a.cols);
  if (F.is_zero(c)) return out;
  for (uint32_t j = 0; j < a.cols; ++j) {
    for (const auto& [r, v] : a.col[j]) {
      FieldElement w = F.mul(v, c);
      if (!F.is_zero(w)) out.col[j].push_back({r, w});
    }
  }
  return out;
}

SparseMat sp_mul(const Field& F, const SparseMat& a, const SparseMat& b) {
  require(a.cols == b.rows, Errc::ShapeMismatch, "sparse mul shape");
  SparseMat out = SparseMat::zero(a.rows, b.cols);
  FlatVec acc = FlatVec::zero(F, a.rows);
  for (uint32_t j = 0; j < b.cols; ++j) {
    std::fill(acc.s.begin(), acc.s.end(), 0);
    for (const auto& [k, v] : b.col[j])
      for (const auto& [r, w] : a.col[k]) vk::add_scaled_at(F, acc, r, w, v);
    for (uint32_t r = 0; r < a.rows; ++r) {
      FieldElement e = vk::get(F, acc, r);
      if (!F.is_zero(e)) out.col[j].push_back({r, e});
    }
  }
  return out;
}

SparseMat sp_pow(const Field& F, const SparseMat& a, uint32_t e) {
  require(a.rows == a.cols, Errc::ShapeMismatch, "power of non-square matrix");
  SparseMat r = SparseMat::identity(F, a.rows);
  for (uint32_t i = 0; i < e; ++i) r = sp_mul(F, r, a);
  return r;
}

SparseMat sp_transpose(const SparseMat& a) {
  SparseMat out = SparseMat::zero(a.cols, a.rows);
  for (uint32_t j = 0; j < a.cols; ++j)
    for (const auto& [r, v] : a.col[j]) out.col[r].push_back({j, v});
  return out;
}

bool sp_equal(const SparseMat& a, const SparseMat& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (uint32_t j = 0; j < a.cols; ++j) {
    if (a.col[j].size() != b.col[j].size()) return false;
    for (size_t k = 0; k < a.col[j].size(); ++k)
      if (a.col[j][k] != b.col[j][k]) return false;
  }
  return true;
}

uint64_t sp_nnz(const SparseMat& a) {
  uint64_t n = 0;
  for (const auto& c : a.col) n += c.size();
  return n;
}

FlatVec sp_apply(const Field& F, const SparseMat& a, const FlatVec& x) {
  FlatVec y = FlatVec::zero(F, a.rows);
  for (uint32_t j = 0; j < a.cols; ++j) {
    FieldElement xj = vk::get(F, x, j);
    if (F.is_zero(xj)) continue;
    for (const auto& [r, w] : a.col[j]) vk::add_scaled_at(F, y, r, w, xj);
  }
  vk::normalize(F, y);
  return y;
}

DenseMat DenseMat::zero(const Field& F, uint32_t r, uint32_t c) {
  DenseMat m;
  m.rows = r;
  m.cols = c;
  m.row.assign(r, FlatVec::zero(F, c));
  return m;
}

DenseMat DenseMat::from_sparse(const Field& F, const SparseMat& a) {
  DenseMat m = zero(F, a.rows, a.cols);
  for (uint32_t j = 0; j < a.cols; ++j)
    for (const auto& [r, v] : a.col[j]) vk::set(F, m.row[r], j, v);
  return m;
}

DenseMat dm_mul(const Field& F, const DenseMat& a, const DenseMat& b) {
  require(a.cols == b.rows, Errc::ShapeMismatch, "dense mul shape");
  DenseMat c = DenseMat::zero(F, a.rows, b.cols);
  uint64_t block = std::max<uint64_t>(1, (1ULL << 62) / std::max<uint64_t>(1, F.axpy_growth_bound()));
  for (uint32_t i = 0; i < a.rows; ++i) {
    uint64_t since = 0;
    for (uint32_t k = 0; k < a.cols; ++k) {
      FieldElement v = vk::get(F, a.row[i], k);
      if (F.is_zero(v)) continue;
      vk::axpy(F, c.row[i], b.row[k], v);
      if (++since >= block) {
        vk::normalize(F, c.row[i]);
        since = 0;
      }
    }
    vk::normalize(F, c.row[i]);
  }
  return c;
}

void dm_add_scaled_sparse(const Field& F, DenseMat& acc, const SparseMat& a, const FieldElement& c) {
  require(acc.rows == a.rows && acc.cols == a.cols, Errc::ShapeMismatch, "dense/sparse accumulate shape");
  for (uint32_t j = 0; j < a.cols; ++j)
    for (const auto& [r, v] : a.col[j]) vk::add_scaled_at(F, acc.row[r], j, c, v);
  for (auto& row : acc.row) vk::normalize(F, row);
}

DenseMat dm_transpose(const Field& F, const DenseMat& a) {
  DenseMat t = DenseMat::zero(F, a.cols, a.rows);
  for (uint32_t i = 0; i < a.rows; ++i)
    for (uint32_t j = 0; j < a.cols; ++j) vk::set(F, t.row[j], i, vk::get(F, a.row[i], j));
  return t;
}

bool dm_is_zero(const Field& F, const DenseMat& a) {
  for (const auto& r : a.row)
    if (!vk::is_zero(F, r)) return false;
  return true;
}

}  // namespace wcw::la
