#include "wcw/witt.hpp"

#include <algorithm>

#include "wcw/rng.hpp"

#include "json.hpp"

namespace wcw::witt {

std::string scenario_name(ScenarioTag tag, uint32_t r) {
  switch (tag) {
    case ScenarioTag::HeightMinusOne: return "height-minus-one";
    case ScenarioTag::Height0: return "height0";
    case ScenarioTag::Height1A: return "height1-a";
    case ScenarioTag::Height1B: return "height1-b";
    case ScenarioTag::HeightR: return "heightr(" + std::to_string(r) + ")";
  }
  return "?";
}

ScenarioTag parse_scenario(const std::string& name, uint32_t* r_out) {
  if (r_out) *r_out = 0;
  if (name == "height-minus-one") return ScenarioTag::HeightMinusOne;
  if (name == "height0") return ScenarioTag::Height0;
  if (name == "height1-a") return ScenarioTag::Height1A;
  if (name == "height1-b") return ScenarioTag::Height1B;
  if (name.rfind("heightr(", 0) == 0 && name.back() == ')') {
    uint32_t r = static_cast<uint32_t>(std::stoul(name.substr(8, name.size() - 9)));
    if (r_out) *r_out = r;
    return ScenarioTag::HeightR;
  }
  fail(Errc::UnknownScenario, "unknown scenario tag '" + name + "'");
}

Witt::Witt(AlgebraShape shape) : shape_(std::move(shape)) {
  // Structure constants, built eagerly: the table is tiny and an immutable
  // Witt is then safe to share across worker threads.
  const uint32_t d = shape_.dim();
  const uint32_t p = shape_.p;
  bracket_table_.assign(static_cast<size_t>(d) * d, {0, 0});
  for (uint32_t a = 0; a < d; ++a) {
    BasisIndex ba = shape_.basis(a);
    for (uint32_t b = 0; b < d; ++b) {
      BasisIndex bb = shape_.basis(b);
      int32_t deg = ba.i + bb.i;
      uint32_t tp = ba.j + bb.j;
      int64_t coeff = ((bb.i - ba.i) % static_cast<int64_t>(p) + p) % p;
      if (coeff == 0 || deg < -1 || deg > static_cast<int32_t>(p) - 2 || tp > shape_.ell) continue;
      bracket_table_[static_cast<size_t>(a) * d + b] = {
          static_cast<uint32_t>(coeff), shape_.lin(BasisIndex{deg, tp}) + 1};
    }
  }
}

LieElement Witt::basis_element(BasisIndex b) const {
  return LieElement{shape_.id(), {{shape_.lin(b), field().one()}}};
}

LieElement Witt::make(const std::vector<std::pair<BasisIndex, FieldElement>>& terms) const {
  std::map<uint32_t, FieldElement> acc;
  for (const auto& [b, c] : terms) {
    field().check(c);
    uint32_t l = shape_.lin(b);
    auto it = acc.find(l);
    if (it == acc.end())
      acc.emplace(l, c);
    else
      it->second = field().add(it->second, c);
  }
  return canonical(std::move(acc));
}

LieElement Witt::canonical(std::map<uint32_t, FieldElement>&& acc) const {
  LieElement out{shape_.id(), {}};
  for (auto& [l, c] : acc)
    if (!field().is_zero(c)) out.terms.push_back({l, c});
  return out;
}

LieElement Witt::add(const LieElement& a, const LieElement& b) const {
  check(a);
  check(b);
  std::map<uint32_t, FieldElement> acc;
  for (const auto& [l, c] : a.terms) acc[l] = c;
  for (const auto& [l, c] : b.terms) {
    auto it = acc.find(l);
    if (it == acc.end())
      acc.emplace(l, c);
    else
      it->second = field().add(it->second, c);
  }
  return canonical(std::move(acc));
}

LieElement Witt::scale(const LieElement& a, const FieldElement& c) const {
  check(a);
  field().check(c);
  LieElement out{shape_.id(), {}};
  if (field().is_zero(c)) return out;
  for (const auto& [l, v] : a.terms) {
    FieldElement w = field().mul(v, c);
    if (!field().is_zero(w)) out.terms.push_back({l, w});
  }
  return out;
}

std::optional<std::pair<uint32_t, uint32_t>> Witt::bracket_basis(uint32_t a, uint32_t b) const {
  const auto& e = bracket_table_[static_cast<size_t>(a) * shape_.dim() + b];
  if (e.second == 0) return std::nullopt;
  return std::make_pair(e.first, e.second - 1);
}

LieElement Witt::bracket(const LieElement& a, const LieElement& b) const {
  check(a);
  check(b);
  std::map<uint32_t, FieldElement> acc;
  for (const auto& [la, ca] : a.terms) {
    for (const auto& [lb, cb] : b.terms) {
      auto e = bracket_basis(la, lb);
      if (!e) continue;
      FieldElement v = field().mul_residue(field().mul(ca, cb), e->first);
      auto it = acc.find(e->second);
      if (it == acc.end())
        acc.emplace(e->second, v);
      else
        it->second = field().add(it->second, v);
    }
  }
  return canonical(std::move(acc));
}

std::optional<uint32_t> Witt::p_map_basis(uint32_t lin) const {
  BasisIndex b = shape_.basis(lin);
  if (b.i != 0) return std::nullopt;
  uint64_t kp = static_cast<uint64_t>(b.j) * shape_.p;
  if (kp > shape_.ell) return std::nullopt;
  return shape_.lin(BasisIndex{0, static_cast<uint32_t>(kp)});
}

LieElement Witt::p_map(const LieElement& x) const {
  check(x);
  require(x.terms.size() <= 1, Errc::NotBasisElement,
          "p-map is exposed on (scalar multiples of) basis elements only");
  if (x.terms.empty()) return zero_element();
  auto [lin, c] = x.terms[0];
  auto target = p_map_basis(lin);
  if (!target) return zero_element();
  // p-semilinearity: (c x)^[p] = c^p x^[p]
  return LieElement{shape_.id(), {{*target, field().pow(c, shape_.p)}}};
}

std::vector<BasisIndex> Witt::filtration(int32_t i) const {
  require(i >= -1 && i <= static_cast<int32_t>(shape_.p) - 2, Errc::OutOfRange, "filtration index");
  std::vector<BasisIndex> out;
  for (int32_t d = i; d <= static_cast<int32_t>(shape_.p) - 2; ++d)
    for (uint32_t j = 0; j <= shape_.ell; ++j) out.push_back(BasisIndex{d, j});
  return out;
}

std::vector<BasisIndex> Witt::graded(int32_t i) const {
  require(i >= -1 && i <= static_cast<int32_t>(shape_.p) - 2, Errc::OutOfRange, "graded index");
  std::vector<BasisIndex> out;
  for (uint32_t j = 0; j <= shape_.ell; ++j) out.push_back(BasisIndex{i, j});
  return out;
}

std::vector<BasisIndex> Witt::tgraded(uint32_t j) const {
  require(j <= shape_.ell, Errc::OutOfRange, "t-graded index");
  std::vector<BasisIndex> out;
  for (int32_t i = -1; i <= static_cast<int32_t>(shape_.p) - 2; ++i) out.push_back(BasisIndex{i, j});
  return out;
}

PChar Witt::make_chi(const std::vector<std::pair<BasisIndex, FieldElement>>& values) const {
  PChar chi{shape_.id(), {}};
  for (const auto& [b, c] : values) {
    field().check(c);
    if (!field().is_zero(c)) chi.values[shape_.lin(b)] = c;
  }
  return chi;
}

FieldElement Witt::chi_at(const PChar& chi, BasisIndex b) const {
  check(chi);
  auto it = chi.values.find(shape_.lin(b));
  return it == chi.values.end() ? field().zero() : it->second;
}

FieldElement Witt::chi_eval(const PChar& chi, const LieElement& x) const {
  check(chi);
  check(x);
  FieldElement acc = field().zero();
  for (const auto& [l, c] : x.terms) {
    auto it = chi.values.find(l);
    if (it != chi.values.end()) acc = field().add(acc, field().mul(it->second, c));
  }
  return acc;
}

int32_t Witt::height(const PChar& chi) const {
  check(chi);
  int32_t max_deg = -2;  // largest Witt degree carrying support
  for (const auto& [l, c] : chi.values) {
    (void)c;
    max_deg = std::max(max_deg, shape_.basis(l).i);
  }
  int32_t h = max_deg + 1;
  require(h <= static_cast<int32_t>(shape_.p) - 2, Errc::NoVanishing,
          "chi does not vanish on any W_(i): support in Witt degree p-2");
  return h;
}

PChar Witt::scenario_chi(ScenarioTag tag, uint64_t seed, uint32_t r) const {
  const uint32_t p = shape_.p;
  const uint32_t ell = shape_.ell;
  Rng rng(Rng::mix(seed, shape_.id()));
  auto nz = [&] { return field().from_residue(1 + rng.below(p - 1)); };
  auto any = [&] { return field().from_residue(rng.below(p)); };

  std::vector<std::pair<BasisIndex, FieldElement>> vals;
  switch (tag) {
    case ScenarioTag::HeightMinusOne:
      break;
    case ScenarioTag::Height0:
      for (uint32_t j = 0; j < ell; ++j) vals.push_back({BasisIndex{-1, j}, any()});
      vals.push_back({BasisIndex{-1, ell}, nz()});
      break;
    case ScenarioTag::Height1A:
      require(ell >= 1, Errc::Infeasible,
              "height1-a needs ell >= 1 (chi(e_0 t^ell)=0 with r=1 is contradictory over W)");
      vals.push_back({BasisIndex{-1, ell}, nz()});
      vals.push_back({BasisIndex{0, 0}, nz()});  // keeps r(chi)=1 while chi(e_0 t^ell)=0
      for (uint32_t j = 0; j < ell; ++j) vals.push_back({BasisIndex{-1, j}, any()});
      break;
    case ScenarioTag::Height1B:
      vals.push_back({BasisIndex{0, ell}, nz()});
      for (uint32_t j = 0; j <= ell; ++j) vals.push_back({BasisIndex{-1, j}, any()});
      for (uint32_t j = 0; j < ell; ++j) vals.push_back({BasisIndex{0, j}, any()});
      break;
    case ScenarioTag::HeightR:
      require(r > 1 && r < p - 1, Errc::Infeasible,
              "heightr needs 1 < r < p-1, got r=" + std::to_string(r));
      vals.push_back({BasisIndex{static_cast<int32_t>(r) - 1, ell}, nz()});
      for (int32_t d = -1; d < static_cast<int32_t>(r) - 1; ++d)
        for (uint32_t j = 0; j <= ell; ++j) vals.push_back({BasisIndex{d, j}, any()});
      break;
  }
  PChar chi = make_chi(vals);

  // Assert the tagged hypotheses before returning.
  int32_t h = height(chi);
  switch (tag) {
    case ScenarioTag::HeightMinusOne:
      require(h == -1, Errc::Internal, "scenario height-minus-one produced h != -1");
      break;
    case ScenarioTag::Height0:
      require(h == 0, Errc::Internal, "scenario height0 produced wrong height");
      require(!field().is_zero(chi_at(chi, BasisIndex{-1, ell})), Errc::Internal, "height0 top layer");
      break;
    case ScenarioTag::Height1A:
      require(h == 1, Errc::Internal, "scenario height1-a produced wrong height");
      require(!field().is_zero(chi_at(chi, BasisIndex{-1, ell})) &&
                  field().is_zero(chi_at(chi, BasisIndex{0, ell})),
              Errc::Internal, "height1-a layer constraints");
      break;
    case ScenarioTag::Height1B:
      require(h == 1, Errc::Internal, "scenario height1-b produced wrong height");
      require(!field().is_zero(chi_at(chi, BasisIndex{0, ell})), Errc::Internal, "height1-b layer constraint");
      break;
    case ScenarioTag::HeightR:
      require(h == static_cast<int32_t>(r), Errc::Internal, "scenario heightr produced wrong height");
      require(!field().is_zero(chi_at(chi, BasisIndex{static_cast<int32_t>(r) - 1, ell})),
              Errc::Internal, "heightr layer constraint");
      break;
  }
  return chi;
}

std::string Witt::to_string(const LieElement& x) const {
  check(x);
  if (x.terms.empty()) return "0";
  std::string s;
  for (const auto& [l, c] : x.terms) {
    BasisIndex b = shape_.basis(l);
    if (!s.empty()) s += " + ";
    s += field().to_string(c) + "*e(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
  }
  return s;
}

std::string Witt::chi_to_string(const PChar& chi) const {
  check(chi);
  if (chi.values.empty()) return "0";
  std::string s;
  for (const auto& [l, c] : chi.values) {
    BasisIndex b = shape_.basis(l);
    if (!s.empty()) s += ", ";
    s += "e(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")=" + field().to_string(c);
  }
  return s;
}

std::string chi_to_json(const Witt& W, const PChar& chi) {
  nlohmann::ordered_json j;
  j["p"] = W.shape().p;
  j["ell"] = W.shape().ell;
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  for (const auto& [l, c] : chi.values) {
    BasisIndex b = W.shape().basis(l);
    vals["e(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")"] = W.field().to_string(c);
  }
  j["values"] = vals;
  return j.dump();
}

namespace {

BasisIndex parse_basis_key(const std::string& key) {
  // "e(i,j)"
  if (key.size() < 6 || key.rfind("e(", 0) != 0 || key.back() != ')')
    fail(Errc::ParseError, "bad chi key '" + key + "' (expected e(i,j))");
  std::string inner = key.substr(2, key.size() - 3);
  size_t comma = inner.find(',');
  require(comma != std::string::npos, Errc::ParseError, "bad chi key '" + key + "'");
  try {
    int32_t i = std::stoi(inner.substr(0, comma));
    uint32_t j = static_cast<uint32_t>(std::stoul(inner.substr(comma + 1)));
    return BasisIndex{i, j};
  } catch (const std::exception&) {
    fail(Errc::ParseError, "bad chi key '" + key + "'");
  }
}

}  // namespace

void chi_json_shape(const std::string& json_text, uint32_t* p, uint32_t* ell) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  require(!j.is_discarded() && j.is_object(), Errc::ParseError, "chi JSON is not an object");
  require(j.contains("p") && j["p"].is_number_unsigned(), Errc::ParseError, "chi JSON missing p");
  require(j.contains("ell") && j["ell"].is_number_unsigned(), Errc::ParseError, "chi JSON missing ell");
  *p = j["p"].get<uint32_t>();
  *ell = j["ell"].get<uint32_t>();
}

PChar chi_from_json(const Witt& W, const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  require(!j.is_discarded() && j.is_object(), Errc::ParseError, "chi JSON is not an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    // Unknown keys are hard errors, not warnings.
    require(k == "p" || k == "ell" || k == "values", Errc::ParseError,
            "unknown key '" + k + "' in chi JSON");
  }
  require(j.value("p", 0u) == W.shape().p && j.value("ell", ~0u) == W.shape().ell, Errc::ShapeMismatch,
          "chi JSON shape differs from the requested algebra");
  std::vector<std::pair<BasisIndex, FieldElement>> vals;
  if (j.contains("values")) {
    require(j["values"].is_object(), Errc::ParseError, "chi values must be an object");
    for (auto it = j["values"].begin(); it != j["values"].end(); ++it) {
      require(it.value().is_string(), Errc::ParseError, "chi value must be a string");
      vals.push_back({parse_basis_key(it.key()), W.field().parse(it.value().get<std::string>())});
    }
  }
  return W.make_chi(vals);
}

}  // namespace wcw::witt
