#pragma once

#include <atomic>
#include <filesystem>

#include "bpc/search.hpp"

namespace bpc {

// Descent certificates on disk, one JSON file per curve key. An entry is
// reused only when it was produced with the same descent options.
class CertificateCache {
public:
    CertificateCache(std::filesystem::path dir, DescentOptions opt);

    RankBound get(const CatalogCurve& curve);
    RankProvider provider();

    std::filesystem::path path_for(const std::string& key) const;
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    std::filesystem::path dir_;
    DescentOptions opt_;
    std::atomic<std::size_t> hits_{0}, misses_{0};
};

} // namespace bpc
