#include "wcw/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wcw::cache {

namespace {

uint64_t fnv64(const std::string& s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string file_for(const std::string& dir, const std::string& key) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv64(key)));
  return dir + "/" + buf + ".wcwmat";
}

}  // namespace

std::string module_key(const witt::Witt& W, const witt::PChar& chi, uint32_t cut,
                       const std::string& lambda_str, const std::vector<uint32_t>& complement) {
  std::ostringstream os;
  os << "wcw-mat/1|p=" << W.shape().p << "|ell=" << W.shape().ell << "|mod=";
  for (auto c : W.field().modulus()) os << c << ",";
  os << "|chi=";
  for (const auto& [lin, v] : chi.values) os << lin << ":" << W.field().to_string(v) << ",";
  os << "|cut=" << cut << "|lambda=" << lambda_str << "|order=";
  for (auto c : complement) os << c << ",";
  return os.str();
}

bool try_load(const std::string& dir, const std::string& key, const witt::Witt& W, uint32_t dim,
              std::vector<la::SparseMat>* out) {
  std::ifstream in(file_for(dir, key));
  if (!in) return false;
  std::string stored_key;
  if (!std::getline(in, stored_key) || stored_key != key) return false;
  uint32_t fdim = 0, gens = 0;
  if (!(in >> fdim >> gens) || fdim != dim || gens != W.dim()) return false;
  std::vector<la::SparseMat> mats(gens, la::SparseMat::zero(dim, dim));
  uint64_t nnz = 0;
  if (!(in >> nnz)) return false;
  for (uint64_t k = 0; k < nnz; ++k) {
    uint32_t g = 0, col = 0, row = 0;
    std::string val;
    if (!(in >> g >> col >> row >> val)) return false;
    if (g >= gens || col >= dim || row >= dim) return false;
    mats[g].col[col].push_back({row, W.field().parse(val)});
  }
  *out = std::move(mats);
  return true;
}

void store(const std::string& dir, const std::string& key, const witt::Witt& W,
           const std::vector<la::SparseMat>& mats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::string path = file_for(dir, key);
  std::string tmp = path + ".tmp";
  {
    std::ofstream outf(tmp, std::ios::trunc);
    if (!outf) return;  // cache is best-effort
    outf << key << "\n";
    uint64_t nnz = 0;
    for (const auto& m : mats) nnz += la::sp_nnz(m);
    uint32_t dim = mats.empty() ? 0u : mats[0].rows;
    outf << dim << " " << mats.size() << "\n" << nnz << "\n";
    for (size_t g = 0; g < mats.size(); ++g)
      for (uint32_t col = 0; col < mats[g].cols; ++col)
        for (const auto& [row, v] : mats[g].col[col])
          outf << g << " " << col << " " << row << " " << W.field().to_string(v) << "\n";
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace wcw::cache
