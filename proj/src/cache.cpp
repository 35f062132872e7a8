#include "bpc/cache.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

#include "bpc/error.hpp"
#include "bpc/serialize.hpp"

namespace bpc {

namespace {

Json options_json(const DescentOptions& o)
{
    return Json{{"naive_bound", std::to_string(o.naive_bound)},   {"conic_bound", std::to_string(o.conic_bound)},
                {"torsor_bound", std::to_string(o.torsor_bound)}, {"max_primes", std::to_string(o.max_primes)},
                {"seed", std::to_string(o.seed)},                 {"sample_budget", std::to_string(o.sample_budget)}};
}

bool same_roots(const SplitCubic& a, const SplitCubic& b)
{
    auto ra = a.roots(), rb = b.roots();
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    return ra == rb;
}

} // namespace

CertificateCache::CertificateCache(std::filesystem::path dir, DescentOptions opt) : dir_(std::move(dir)), opt_(opt)
{
    std::filesystem::create_directories(dir_);
}

std::filesystem::path CertificateCache::path_for(const std::string& key) const
{
    std::string name;
    for (char c : key) name += (c == ':' || c == ',') ? '_' : c;
    return dir_ / (name + ".json");
}

RankBound CertificateCache::get(const CatalogCurve& curve)
{
    const std::string key = curve.key();
    const auto path = path_for(key);
    const Json want = options_json(opt_);
    if (std::ifstream in{path}) {
        try {
            const Json j = Json::parse(in);
            if (j.at("key") == key && j.at("options") == want) {
                RankBound b = rank_bound_from(j.at("rank"));
                // A stale or edited file must still describe this curve.
                verify(same_roots(b.certificate.curve, curve.curve), "cached certificate for " + key + " is for another curve");
                ++hits_;
                return b;
            }
        } catch (const VerificationError&) {
            throw;
        } catch (const std::exception&) {
            // unreadable entry: recompute and overwrite
        }
    }
    ++misses_;
    RankBound b = two_descent(curve.curve, opt_);
    const Json out{{"key", key}, {"options", want}, {"rank", to_json(b)}};
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    auto tmp = path;
    tmp += ".tmp" + tid.str();
    {
        std::ofstream f(tmp);
        f << out.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
    return b;
}

RankProvider CertificateCache::provider()
{
    return [this](const CatalogCurve& c) { return get(c); };
}

} // namespace bpc
