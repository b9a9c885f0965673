#pragma once

#include <string>
#include <vector>

#include "wcw/linalg.hpp"
#include "wcw/witt.hpp"

namespace wcw::cache {

// On-disk cache for action matrices. Purely an optimization: results must be
// identical with it disabled, which build_* guarantees by re-verifying the
// module axioms on loaded matrices. Files are keyed by a content hash of the
// canonical key string; the full key is stored in the header and compared on
// load, so hash collisions degrade to a miss.

// Canonical key: p, ell, modulus, chi values, cut, lambda, complement order.
std::string module_key(const witt::Witt& W, const witt::PChar& chi, uint32_t cut,
                       const std::string& lambda_str, const std::vector<uint32_t>& complement);

bool try_load(const std::string& dir, const std::string& key, const witt::Witt& W, uint32_t dim,
              std::vector<la::SparseMat>* out);

void store(const std::string& dir, const std::string& key, const witt::Witt& W,
           const std::vector<la::SparseMat>& mats);

}  // namespace wcw::cache
