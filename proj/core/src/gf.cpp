#include "wcw/gf.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace wcw::gf {

namespace {

// Dense polynomials over F_p, coefficients low-to-high, trimmed.
using Poly = std::vector<uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& f, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<uint32_t>((prod[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
  }
  // reduce mod monic f
  size_t df = f.size() - 1;
  for (size_t k = prod.size(); k-- > df;) {
    uint32_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (size_t t = 0; t < df; ++t)
      prod[k - df + t] = static_cast<uint32_t>(
          (prod[k - df + t] + static_cast<uint64_t>(c) * (p - f[t] % p)) % p);
  }
  prod.resize(df);
  trim(prod);
  return prod;
}

Poly powmod(Poly base, uint64_t e, const Poly& f, uint32_t p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = mulmod(r, base, f, p);
    base = mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& b, uint32_t p) {
  trim(a);
  if (b.empty()) fail(Errc::Internal, "poly_mod by zero");
  uint64_t lead_inv = 1;
  {  // inverse of b's leading coefficient
    uint64_t x = b.back() % p, r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    lead_inv = r;
  }
  while (a.size() >= b.size() && !a.empty()) {
    uint64_t c = a.back() % p * lead_inv % p;
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i)
      a[shift + i] = static_cast<uint32_t>((a[shift + i] + c * (p - b[i] % p)) % p);
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// f monic of degree m >= 1: irreducible iff x^{p^m} == x (mod f) and
// gcd(x^{p^{m/q}} - x, f) = 1 for every prime divisor q of m.
bool poly_irreducible(const Poly& f, uint32_t p) {
  size_t m = f.size() - 1;
  if (m == 1) return true;
  Poly x{0, 1};
  // x^{p^k} by k-fold application of c -> c^p
  auto frob_power = [&](size_t k) {
    Poly t = x;
    for (size_t i = 0; i < k; ++i) t = powmod(t, p, f, p);
    return t;
  };
  Poly xq = frob_power(m);
  Poly diff = xq;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim(diff);
  if (!diff.empty()) return false;
  for (size_t q = 2; q <= m; ++q) {
    if (m % q != 0 || !is_prime(q)) continue;
    Poly t = frob_power(m / q);
    t.resize(std::max<size_t>(t.size(), 2), 0);
    t[1] = (t[1] + p - 1) % p;
    trim(t);
    Poly g = poly_gcd(f, t, p);
    if (g.size() != 1) return false;
  }
  return true;
}

uint32_t fnv1a(const void* data, size_t n, uint32_t h = 2166136261u) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) h = (h ^ b[i]) * 16777619u;
  return h;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool FieldElement::operator<(const FieldElement& o) const {
  return c < o.c;
}

Field::Field(uint32_t p, uint32_t m) : p_(p), m_(m) {
  require(is_prime(p) && p > 3, Errc::NonPrime, "p must be a prime > 3, got " + std::to_string(p));
  require(m >= 1 && m <= kMaxDegree, Errc::TooLarge,
          "extension degree " + std::to_string(m) + " outside [1, " + std::to_string(kMaxDegree) + "]");

  // Least monic irreducible of degree m, ordered by the base-p integer
  // encoding of the non-leading coefficients.
  uint64_t count = 1;
  for (uint32_t i = 0; i < m; ++i) count *= p;
  modulus_.assign(m + 1, 0);
  modulus_[m] = 1;
  bool found = false;
  for (uint64_t v = 0; v < count; ++v) {
    Poly f(m + 1, 0);
    f[m] = 1;
    uint64_t t = v;
    for (uint32_t i = 0; i < m; ++i) {
      f[i] = static_cast<uint32_t>(t % p);
      t /= p;
    }
    if (poly_irreducible(f, p)) {
      for (uint32_t i = 0; i <= m; ++i) modulus_[i] = static_cast<uint16_t>(f[i]);
      found = true;
      break;
    }
  }
  require(found, Errc::Internal, "no irreducible polynomial found");  // cannot happen

  struct {
    uint32_t p, m;
  } hdr{p_, m_};
  fid_ = fnv1a(&hdr, sizeof hdr);
  fid_ = fnv1a(modulus_.data(), modulus_.size() * sizeof(uint16_t), fid_);
  build_tables();
}

void Field::build_tables() {
  inv_table_.assign(p_, 0);
  for (uint32_t r = 1; r < p_; ++r) {
    uint64_t x = r, acc = 1, e = p_ - 2;
    while (e) {
      if (e & 1) acc = acc * x % p_;
      x = x * x % p_;
      e >>= 1;
    }
    inv_table_[r] = static_cast<uint16_t>(acc);
  }

  // x^{m+t} mod modulus for t = 0..m-2
  red_.clear();
  if (m_ > 1) {
    std::vector<uint32_t> cur(m_, 0);  // x^m mod f = -(f_0 + ... + f_{m-1} x^{m-1})
    for (uint32_t i = 0; i < m_; ++i) cur[i] = (p_ - modulus_[i] % p_) % p_;
    for (uint32_t t = 0; t + 1 < m_; ++t) {
      red_.push_back(std::vector<uint16_t>(cur.begin(), cur.end()));
      // multiply by x and reduce once
      std::vector<uint32_t> next(m_, 0);
      for (uint32_t i = 0; i + 1 < m_; ++i) next[i + 1] = cur[i];
      uint32_t top = cur[m_ - 1];
      for (uint32_t i = 0; i < m_; ++i)
        next[i] = static_cast<uint32_t>((next[i] + static_cast<uint64_t>(top) * ((p_ - modulus_[i] % p_) % p_)) % p_);
      cur = next;
    }
  }

  // Frobenius columns: coords of (x^j)^p, j = 0..m-1
  Poly f(modulus_.begin(), modulus_.end());
  frob_cols_.assign(m_, std::vector<uint16_t>(m_, 0));
  for (uint32_t j = 0; j < m_; ++j) {
    Poly xj(j + 1, 0);
    xj[j] = 1;
    Poly r = powmod(xj, p_, f, p_);
    for (size_t i = 0; i < r.size(); ++i) frob_cols_[j][i] = static_cast<uint16_t>(r[i]);
  }

  // One deferred axpy adds at most m (p-1)^2 to a slot from the raw product,
  // plus (m-1)(p-1)^2 from folding the (mod-p reduced) overflow coefficients.
  uint64_t pm1 = p_ - 1;
  axpy_growth_ = static_cast<uint64_t>(2 * m_ - 1) * pm1 * pm1;
}

uint64_t Field::order() const {
  uint64_t o = 1;
  for (uint32_t i = 0; i < m_; ++i) {
    require(o <= UINT64_MAX / p_, Errc::TooLarge, "field order exceeds 64 bits");
    o *= p_;
  }
  return o;
}

FieldElement Field::zero() const {
  FieldElement e;
  e.fid = fid_;
  return e;
}

FieldElement Field::one() const { return from_residue(1); }

FieldElement Field::from_residue(uint64_t r) const {
  FieldElement e;
  e.fid = fid_;
  e.c[0] = static_cast<uint16_t>(r % p_);
  return e;
}

FieldElement Field::from_coords(const std::vector<uint16_t>& coords) const {
  require(coords.size() <= m_, Errc::OutOfRange, "coordinate tuple longer than field degree");
  FieldElement e;
  e.fid = fid_;
  for (size_t i = 0; i < coords.size(); ++i) e.c[i] = static_cast<uint16_t>(coords[i] % p_);
  return e;
}

FieldElement Field::element_at(uint64_t index) const {
  FieldElement e;
  e.fid = fid_;
  for (uint32_t i = 0; i < m_; ++i) {
    e.c[i] = static_cast<uint16_t>(index % p_);
    index /= p_;
  }
  return e;
}

uint64_t Field::index_of(const FieldElement& a) const {
  check(a);
  uint64_t idx = 0;
  for (uint32_t i = m_; i-- > 0;) idx = idx * p_ + a.c[i];
  return idx;
}

bool Field::is_zero(const FieldElement& a) const {
  check(a);
  for (uint32_t i = 0; i < m_; ++i)
    if (a.c[i]) return false;
  return true;
}

bool Field::in_prime_subfield(const FieldElement& a) const {
  check(a);
  for (uint32_t i = 1; i < m_; ++i)
    if (a.c[i]) return false;
  return true;
}

FieldElement Field::add(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r;
  r.fid = fid_;
  for (uint32_t i = 0; i < m_; ++i) r.c[i] = static_cast<uint16_t>((a.c[i] + b.c[i]) % p_);
  return r;
}

FieldElement Field::sub(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r;
  r.fid = fid_;
  for (uint32_t i = 0; i < m_; ++i) r.c[i] = static_cast<uint16_t>((a.c[i] + p_ - b.c[i]) % p_);
  return r;
}

FieldElement Field::neg(const FieldElement& a) const {
  check(a);
  FieldElement r;
  r.fid = fid_;
  for (uint32_t i = 0; i < m_; ++i) r.c[i] = static_cast<uint16_t>((p_ - a.c[i]) % p_);
  return r;
}

FieldElement Field::mul(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r;
  r.fid = fid_;
  if (m_ == 1) {
    r.c[0] = static_cast<uint16_t>(static_cast<uint64_t>(a.c[0]) * b.c[0] % p_);
    return r;
  }
  uint64_t u[2 * kMaxDegree] = {0};
  for (uint32_t i = 0; i < m_; ++i) {
    if (a.c[i] == 0) continue;
    for (uint32_t j = 0; j < m_; ++j) u[i + j] += static_cast<uint64_t>(a.c[i]) * b.c[j];
  }
  for (uint32_t k = 0; k < m_; ++k) {
    uint64_t acc = u[k];
    for (uint32_t t = 0; t + 1 < m_; ++t) acc += u[m_ + t] % p_ * red_[t][k];
    r.c[k] = static_cast<uint16_t>(acc % p_);
  }
  return r;
}

FieldElement Field::mul_residue(const FieldElement& a, uint64_t r) const {
  check(a);
  FieldElement out;
  out.fid = fid_;
  uint64_t rr = r % p_;
  for (uint32_t i = 0; i < m_; ++i) out.c[i] = static_cast<uint16_t>(a.c[i] * rr % p_);
  return out;
}

FieldElement Field::inv(const FieldElement& a) const {
  check(a);
  require(!is_zero(a), Errc::DivisionByZero, "inverse of zero");
  if (m_ == 1) {
    FieldElement r;
    r.fid = fid_;
    r.c[0] = inv_table_[a.c[0]];
    return r;
  }
  // extended Euclid in F_p[x] between a and the modulus
  Poly r0(modulus_.begin(), modulus_.end());
  Poly r1;
  for (uint32_t i = 0; i < m_; ++i) r1.push_back(a.c[i]);
  trim(r1);
  Poly s0{}, s1{1};  // coefficients of a in the Bezout identity
  while (true) {
    trim(r1);
    if (r1.empty()) fail(Errc::Internal, "xgcd hit zero remainder before unit");
    if (r1.size() == 1) break;
    // one division step: r0 = q*r1 + r2 ; s2 = s0 - q*s1
    Poly q(r0.size() - r1.size() + 1, 0);
    Poly rem = r0;
    uint64_t li = inv_table_[r1.back() % p_];
    while (rem.size() >= r1.size() && !rem.empty()) {
      uint64_t c = rem.back() % p_ * li % p_;
      size_t shift = rem.size() - r1.size();
      q[shift] = static_cast<uint32_t>(c);
      for (size_t i = 0; i < r1.size(); ++i)
        rem[shift + i] = static_cast<uint32_t>((rem[shift + i] + c * (p_ - r1[i] % p_)) % p_);
      trim(rem);
    }
    Poly qs1(q.size() + s1.size(), 0);
    qs1.assign(q.empty() || s1.empty() ? 0 : q.size() + s1.size() - 1, 0);
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j)
        qs1[i + j] = static_cast<uint32_t>((qs1[i + j] + static_cast<uint64_t>(q[i]) * s1[j]) % p_);
    Poly s2 = s0;
    s2.resize(std::max(s2.size(), qs1.size()), 0);
    for (size_t i = 0; i < qs1.size(); ++i) s2[i] = static_cast<uint32_t>((s2[i] + p_ - qs1[i]) % p_);
    trim(s2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  uint64_t unit_inv = inv_table_[r1[0] % p_];
  FieldElement out;
  out.fid = fid_;
  for (size_t i = 0; i < s1.size() && i < m_; ++i)
    out.c[i] = static_cast<uint16_t>(s1[i] * unit_inv % p_);
  return out;
}

FieldElement Field::pow(const FieldElement& a, uint64_t e) const {
  check(a);
  FieldElement base = a, r = one();
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

FieldElement Field::frobenius(const FieldElement& a) const {
  check(a);
  FieldElement r;
  r.fid = fid_;
  for (uint32_t i = 0; i < m_; ++i) {
    uint64_t acc = 0;
    for (uint32_t j = 0; j < m_; ++j) acc += static_cast<uint64_t>(frob_cols_[j][i]) * a.c[j];
    r.c[i] = static_cast<uint16_t>(acc % p_);
  }
  return r;
}

FieldElement Field::pth_root(const FieldElement& a) const {
  check(a);
  FieldElement r = a;
  for (uint32_t k = 0; k + 1 < m_; ++k) r = frobenius(r);
  return r;
}

std::vector<FieldElement> Field::artin_schreier_roots(const FieldElement& c) const {
  check(c);
  // (Frob - Id) z = c over F_p, m x m augmented elimination
  uint32_t n = m_;
  std::vector<std::vector<uint32_t>> aug(n, std::vector<uint32_t>(n + 1, 0));
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j)
      aug[i][j] = (frob_cols_[j][i] + (i == j ? p_ - 1 : 0)) % p_;
    aug[i][n] = c.c[i];
  }
  std::vector<int> pivot_of_col(n, -1);
  uint32_t row = 0;
  for (uint32_t col = 0; col < n && row < n; ++col) {
    uint32_t sel = row;
    while (sel < n && aug[sel][col] == 0) ++sel;
    if (sel == n) continue;
    std::swap(aug[sel], aug[row]);
    uint64_t pi = inv_table_[aug[row][col]];
    for (uint32_t j = col; j <= n; ++j) aug[row][j] = static_cast<uint32_t>(aug[row][j] * pi % p_);
    for (uint32_t i = 0; i < n; ++i) {
      if (i == row || aug[i][col] == 0) continue;
      uint64_t f = aug[i][col];
      for (uint32_t j = col; j <= n; ++j)
        aug[i][j] = static_cast<uint32_t>((aug[i][j] + f * (p_ - aug[row][j])) % p_);
    }
    pivot_of_col[col] = static_cast<int>(row);
    ++row;
  }
  for (uint32_t i = row; i < n; ++i)
    if (aug[i][n] != 0) return {};  // inconsistent: not split over this field

  // particular solution + kernel enumeration
  std::vector<uint16_t> part(n, 0);
  std::vector<uint32_t> free_cols;
  for (uint32_t col = 0; col < n; ++col) {
    if (pivot_of_col[col] >= 0)
      part[col] = static_cast<uint16_t>(aug[pivot_of_col[col]][n]);
    else
      free_cols.push_back(col);
  }
  std::vector<std::vector<uint16_t>> kernel;
  for (uint32_t fcol : free_cols) {
    std::vector<uint16_t> k(n, 0);
    k[fcol] = 1;
    for (uint32_t col = 0; col < n; ++col)
      if (pivot_of_col[col] >= 0)
        k[col] = static_cast<uint16_t>((p_ - aug[pivot_of_col[col]][fcol]) % p_);
    kernel.push_back(std::move(k));
  }
  uint64_t total = 1;
  for (size_t i = 0; i < kernel.size(); ++i) total *= p_;
  require(total <= 1u << 20, Errc::TooLarge, "Artin-Schreier kernel unexpectedly large");
  std::vector<FieldElement> roots;
  for (uint64_t t = 0; t < total; ++t) {
    std::vector<uint16_t> sol = part;
    uint64_t tt = t;
    for (auto& k : kernel) {
      uint64_t coef = tt % p_;
      tt /= p_;
      for (uint32_t i = 0; i < n; ++i)
        sol[i] = static_cast<uint16_t>((sol[i] + coef * k[i]) % p_);
    }
    roots.push_back(from_coords(sol));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::string Field::to_string(const FieldElement& a) const {
  check(a);
  if (in_prime_subfield(a)) return std::to_string(a.c[0]);
  std::string s = "[";
  for (uint32_t i = 0; i < m_; ++i) {
    if (i) s += ",";
    s += std::to_string(a.c[i]);
  }
  return s + "]";
}

FieldElement Field::parse(const std::string& s) const {
  if (s.empty()) fail(Errc::ParseError, "empty field element");
  if (s[0] != '[') {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    require(end && *end == '\0' && errno == 0, Errc::ParseError, "bad field element '" + s + "'");
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return from_residue(static_cast<uint64_t>(r));
  }
  require(s.back() == ']', Errc::ParseError, "unterminated coordinate tuple '" + s + "'");
  std::vector<uint16_t> coords;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    require(end && *end == '\0' && errno == 0, Errc::ParseError, "bad coordinate '" + tok + "'");
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    coords.push_back(static_cast<uint16_t>(r));
  }
  return from_coords(coords);
}

std::string Field::describe() const {
  std::string s = "F_{" + std::to_string(p_);
  if (m_ > 1) s += "^" + std::to_string(m_);
  s += "}, modulus=[";
  for (uint32_t i = 0; i <= m_; ++i) {
    if (i) s += ",";
    s += std::to_string(modulus_[i]);
  }
  return s + "]";
}

uint16_t Field::inv_residue(uint16_t r) const {
  require(r % p_ != 0, Errc::DivisionByZero, "inverse of zero residue");
  return inv_table_[r % p_];
}

}  // namespace wcw::gf
