// bpc: command-line front end. Records go to --out (or stdout) as JSONL;
// logs go to stderr.

#include <omp.h>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "bpc/cache.hpp"
#include "bpc/error.hpp"
#include "bpc/families.hpp"
#include "bpc/serialize.hpp"

using namespace bpc;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInadmissible = 2, kInconclusive = 3, kVerification = 4 };

struct Global {
    int threads = 0;
    std::string log_level = "info";
    std::string out;
    std::string cache_dir;
    bool wall_clock = false;
    DescentOptions descent;
};

class Sink {
public:
    Sink(const std::string& path, std::string command, bool wall_clock)
        : command_(std::move(command)), stamp_(record_timestamp(wall_clock))
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw DomainError("cannot open output file " + path);
        }
    }
    void emit(const std::string& record, Json payload)
    {
        out() << envelope(command_, record, stamp_, std::move(payload)).dump() << '\n';
        ++count_;
    }
    std::size_t count() const { return count_; }

private:
    std::ostream& out() { return file_ ? *file_ : std::cout; }
    std::string command_, stamp_;
    std::unique_ptr<std::ofstream> file_;
    std::size_t count_ = 0;
};

RankProvider make_provider(const Global& g, std::shared_ptr<CertificateCache>& keep)
{
    if (g.cache_dir.empty()) return descent_provider(g.descent);
    keep = std::make_shared<CertificateCache>(g.cache_dir, g.descent);
    return keep->provider();
}

std::vector<Json> read_jsonl(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    std::vector<Json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(Json::parse(line));
    }
    return out;
}

std::vector<BpcHit> read_hits(const std::string& path)
{
    std::vector<BpcHit> hits;
    for (const auto& j : read_jsonl(path)) {
        if (j.value("record", "") == "hit") hits.push_back(hit_from(j.at("payload")));
    }
    return hits;
}

void write_atomic(const fs::path& path, const std::string& text)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw DomainError("cannot write " + tmp.string());
        f << text;
    }
    fs::rename(tmp, path);
}

std::string hits_text(const std::vector<BpcHit>& hits, const std::string& command, bool wall_clock)
{
    const std::string stamp = record_timestamp(wall_clock);
    std::string s;
    for (const auto& h : hits) s += envelope(command, "hit", stamp, to_json(h)).dump() + "\n";
    return s;
}

void verify_hits(const std::vector<BpcHit>& hits)
{
    for (const auto& h : hits) {
        verify(reverify(h), "emitted hit failed re-verification under classify");
    }
}

std::vector<ParamPair> pair_range(std::uint64_t p_min, std::uint64_t p_max)
{
    std::vector<ParamPair> out;
    PairStream ps(p_max);
    while (auto pp = ps.next()) {
        if (pp->p >= p_min) out.push_back(*pp);
    }
    return out;
}

// ---- subcommands ----

int run_scan_sfp(const Global& g, std::uint64_t p_max, const std::string& resume, std::uint64_t block, bool serial,
                 bool bloom, unsigned bloom_bits, unsigned partitions)
{
    Algo1Options opt;
    opt.p_max = p_max;
    opt.parallel = !serial;
    opt.threads = g.threads;
    opt.block = block;
    opt.store = bloom ? StoreMode::Bloom : StoreMode::Exact;
    opt.bloom_log2_bits = bloom_bits;
    opt.bloom_partitions = partitions;
    if (!resume.empty()) {
        if (g.out.empty()) throw DomainError("--resume needs --out so that earlier hits can be reloaded");
        if (fs::exists(resume)) {
            std::ifstream in(resume);
            opt.resume = checkpoint_from(Json::parse(in));
            opt.prior = fs::exists(g.out) ? read_hits(g.out) : std::vector<BpcHit>{};
            spdlog::info("resuming after {} with {} hits", opt.resume->cursor.str(), opt.prior.size());
        }
        opt.on_checkpoint = [&](const Algo1Checkpoint& ck, const std::vector<BpcHit>& hits) {
            verify_hits(hits);
            write_atomic(g.out, hits_text(hits, "scan-sfp", g.wall_clock));
            write_atomic(resume, to_json(ck).dump() + "\n");
            spdlog::debug("checkpoint {} hits {}", ck.cursor.str(), ck.hit_count);
        };
    }
    const auto res = algo1_scan(opt);
    verify_hits(res.hits);
    std::size_t f = 0;
    for (const auto& h : res.hits) f += h.kind == HitKind::FBpc;
    spdlog::info("p <= {}: {} pairs, {} collisions, {} hits ({} F, {} I)", p_max, res.pairs, res.collisions,
                 res.hits.size(), f, res.hits.size() - f);
    if (!g.out.empty()) {
        write_atomic(g.out, hits_text(res.hits, "scan-sfp", g.wall_clock));
        if (!resume.empty()) write_atomic(resume, to_json(res.final_checkpoint).dump() + "\n");
    } else {
        std::cout << hits_text(res.hits, "scan-sfp", g.wall_clock);
    }
    return kOk;
}

int run_scan_ec(const Global& g, std::uint64_t p_min, std::uint64_t p_max, const std::string& from_hits,
                const std::string& kind_s, unsigned depth)
{
    std::shared_ptr<CertificateCache> cache;
    const RankProvider rank = make_provider(g, cache);
    Algo2Options opt;
    opt.depth = depth;
    opt.threads = g.threads;
    std::vector<HitKind> kinds;
    if (kind_s == "F" || kind_s == "both") kinds.push_back(HitKind::FBpc);
    if (kind_s == "I" || kind_s == "both") kinds.push_back(HitKind::IBpc);
    Sink sink(g.out, "scan-ec", g.wall_clock);
    std::size_t inconclusive = 0;
    for (HitKind k : kinds) {
        std::vector<ParamPair> pairs;
        if (!from_hits.empty()) {
            std::set<ParamPair> s;
            for (const auto& h : read_hits(from_hits)) {
                if (h.kind != k) continue;
                if (h.aspect_pair) s.insert(*h.aspect_pair);
                for (const auto& t : h.kln) {
                    if (auto a = kln_aspect_pair(t, k)) s.insert(*a);
                }
            }
            pairs.assign(s.begin(), s.end());
        } else {
            pairs = pair_range(p_min, p_max);
        }
        spdlog::info("{}: {} pairs", hit_kind_name(k), pairs.size());
        auto res = algo2_scan(pairs, k, rank, opt);
        verify_hits(res.hits);
        for (const auto& h : res.hits) sink.emit("hit", to_json(h));
        for (const auto& r : res.reports) {
            inconclusive += r.inconclusive.size();
            for (const auto& key : r.inconclusive) spdlog::warn("inconclusive rank on {}: pair skipped", key);
            sink.emit("pair_report", to_json(r));
        }
    }
    spdlog::info("{} records, {} inconclusive curves", sink.count(), inconclusive);
    return kOk;
}

int run_exclude(const Global& g, const std::string& target, std::optional<std::uint64_t> p,
                std::optional<std::uint64_t> q, std::optional<std::uint64_t> p_max)
{
    std::shared_ptr<CertificateCache> cache;
    const RankProvider rank = make_provider(g, cache);
    const bool face = target == "face";
    std::vector<ParamPair> pairs;
    if (p && q) {
        if (!ParamPair::admissible(*p, *q)) throw DomainError("inadmissible pair (" + std::to_string(*p) + "," + std::to_string(*q) + ")");
        pairs.push_back(ParamPair::make(*p, *q));
    } else if (p_max) {
        pairs = pair_range(2, *p_max);
    } else {
        throw DomainError("exclude needs --p and --q, or --p-max");
    }
    std::vector<ExclusionVerdict> out(pairs.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(g.threads > 0 ? g.threads : omp_get_max_threads())
    for (std::int64_t i = 0; i < std::int64_t(pairs.size()); ++i) {
        try {
            out[i] = face ? exclude_face(pairs[i], rank) : exclude_internal(pairs[i], rank);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    Sink sink(g.out, "exclude", g.wall_clock);
    std::map<Verdict, std::size_t> tally;
    for (const auto& v : out) {
        ++tally[v.verdict];
        sink.emit("verdict", to_json(v));
    }
    spdlog::info("{}: {} prohibited, {} not prohibited, {} unknown", target, tally[Verdict::Prohibited],
                 tally[Verdict::NotProhibited], tally[Verdict::Unknown]);
    if (pairs.size() == 1 && out[0].verdict == Verdict::Unknown) return kInconclusive;
    return kOk;
}

// Plain tokens are lengths; "sq:N" gives a squared length directly.
Integer squared_arg(const std::string& s)
{
    if (s.rfind("sq:", 0) == 0) return parse_integer(s.substr(3));
    const Integer v = parse_integer(s);
    return v * v;
}

int run_classify(const Global& g, const std::vector<std::string>& args, bool squared)
{
    if (args.size() != 3) throw DomainError("classify needs three edges");
    std::array<Integer, 3> sq;
    for (int i = 0; i < 3; ++i) sq[i] = squared ? parse_integer(args[i]) : squared_arg(args[i]);
    const IvdSquares ivd = IvdSquares::make(sq[0], sq[1], sq[2]);
    Sink sink(g.out, "classify", g.wall_clock);
    sink.emit("classification", Json{{"cuboid", to_json(ivd)}, {"classification", to_json(classify(ivd))}});
    return kOk;
}

int run_family(const Global& g, const std::string& fam, std::optional<std::uint64_t> p, std::optional<std::uint64_t> q,
               std::optional<std::uint64_t> p_max)
{
    std::vector<ParamPair> pairs;
    const bool single = p && q;
    if (single) {
        if (!ParamPair::admissible(*p, *q)) throw DomainError("inadmissible pair (" + std::to_string(*p) + "," + std::to_string(*q) + ")");
        pairs.push_back(ParamPair::make(*p, *q));
    } else if (p_max) {
        pairs = pair_range(2, *p_max);
    } else {
        throw DomainError("family needs --p and --q, or --p-max");
    }
    Sink sink(g.out, "family", g.wall_clock);
    std::size_t skipped = 0;
    for (const auto& pp : pairs) {
        if (fam == "saunderson") {
            sink.emit("euler_brick", to_json(saunderson(pp)));
        } else if (fam == "t3") {
            const auto t = t3_check(pp);
            verify(t.identity_ok, "quartic identity fails at " + pp.str());
            Json j = to_json(t);
            j["pair"] = to_json(pp);
            sink.emit("t3", std::move(j));
        } else {
            const bool ok = fam == "t2" ? t2_admissible(pp) : fam == "t5a" ? t5a_admissible(pp) : t5b_admissible(pp);
            if (!ok) {
                if (single) throw DomainError(fam + ": pair " + pp.str() + " fails the family sign condition");
                ++skipped;
                continue;
            }
            const auto r = fam == "t2" ? t2_family(pp) : fam == "t5a" ? t5a_family(pp) : t5b_family(pp);
            for (const auto& d : r.discrepancies) {
                spdlog::warn("{} {}: printed {} = {} but the edges force {}", fam, pp.str(), d.what, to_string(d.printed),
                             to_string(d.derived));
            }
            sink.emit("family", to_json(r));
        }
    }
    if (skipped) spdlog::info("{} pairs outside the family's sign condition skipped", skipped);
    return kOk;
}

int run_kln(const Global& g, const std::vector<std::string>& args, const std::string& hits_file)
{
    if (args.size() != 3) throw DomainError("kln needs k l n");
    const KlnTriple t = KlnTriple::make(parse_integer(args[0]), parse_integer(args[1]), parse_integer(args[2]));
    const auto qv = kln_quantities(t);
    static const char* names[] = {"ln", "k2+l2", "k2+ln", "k2+n2", "l2-ln"};
    Json quantities = Json::object();
    for (int i = 0; i < 5; ++i) {
        quantities[names[i]] = Json{{"value", int_json(qv.values[i])}, {"square", qv.square[i]}};
    }
    Json j{{"kln", to_json(t)}, {"quantities", std::move(quantities)}};
    if (t.ln_square()) {
        const IvdSquares ivd = cuboid_from_kln(t);
        j["cuboid"] = to_json(ivd);
        j["classification"] = to_json(classify(ivd));
        j["k_over_m"] = rat_json(k_over_m(t));
        j["sqrt_l_over_n"] = rat_json(sqrt_l_over_n(t));
    } else {
        j["variant"] = variant_name(classify_variant(t));
    }
    if (!hits_file.empty()) {
        Json cousins = Json::array();
        if (t.ln_square()) {
            for (const auto& h : read_hits(hits_file)) {
                for (const auto& other : h.kln) {
                    if (other == t) continue;
                    const auto rep = check_cousin(t, other);
                    if (rep) {
                        cousins.push_back(Json{{"kln", to_json(other)},
                                               {"ratio", rat_json(rep.ratio_second)},
                                               {"frame", rat_json(rep.frame_second)},
                                               {"spread", rat_json(rep.spread_second)}});
                    }
                }
            }
        }
        j["cousins"] = std::move(cousins);
    }
    Sink sink(g.out, "kln", g.wall_clock);
    sink.emit("kln", std::move(j));
    return kOk;
}

int run_descent(const Global& g, const std::string& id, std::optional<std::uint64_t> p, std::optional<std::uint64_t> q,
                const std::string& n, const std::string& u, const std::string& w)
{
    std::string key = id + ":";
    if (id == "CN") {
        key += n;
    } else if (id == "Face") {
        key += u + "," + w;
    } else {
        if (!p || !q) throw DomainError("descent " + id + " needs --p and --q");
        if (!ParamPair::admissible(*p, *q)) throw DomainError("inadmissible pair (" + std::to_string(*p) + "," + std::to_string(*q) + ")");
        key += std::to_string(*p) + "," + std::to_string(*q);
    }
    const CatalogCurve cc = from_key(key);
    std::shared_ptr<CertificateCache> cache;
    const RankBound b = make_provider(g, cache)(cc);
    Json torsion = Json::array();
    for (const auto& t : torsion_points(cc.curve)) torsion.push_back(to_json(t));
    Sink sink(g.out, "descent", g.wall_clock);
    sink.emit("certificate", Json{{"curve", key}, {"torsion", std::move(torsion)}, {"rank", to_json(b)}});
    spdlog::info("{}: {} (rank in [{}, {}])", key, status_name(b.status), b.lower,
                 b.upper ? std::to_string(*b.upper) : std::string("?"));
    return b.status == RankStatus::Inconclusive ? kInconclusive : kOk;
}

int run_verify_plinth(const Global& g, const std::string& file, const std::vector<std::string>& scale, bool ppf)
{
    std::ifstream in(file);
    if (!in) throw DomainError("cannot read " + file);
    Plinth pl = plinth_from(Json::parse(in));
    if (!scale.empty()) {
        if (scale.size() != 2) throw DomainError("--scale takes i j");
        pl = scale_plinth(pl, parse_integer(scale[0]), parse_integer(scale[1]));
    }
    const auto rep = verify_plinth(pl);
    Sink sink(g.out, "verify-plinth", g.wall_clock);
    sink.emit("plinth", Json{{"plinth", to_json(pl)}, {"report", to_json(rep)}});
    if (ppf && rep.perfect) {
        const Plinth frame = ppf_from_plinth(pl);
        sink.emit("plinth", Json{{"plinth", to_json(frame)}, {"report", to_json(verify_plinth(frame))}});
    }
    spdlog::info("{} of 28 distances integral", rep.integer_count);
    return rep.perfect ? kOk : kVerification;
}

int run_report(const std::string& file)
{
    std::map<std::string, std::size_t> by_record, by_detail;
    std::size_t lines = 0;
    for (const auto& j : read_jsonl(file)) {
        ++lines;
        const std::string rec = j.value("record", "?");
        ++by_record[rec];
        const Json& p = j.at("payload");
        if (rec == "hit") ++by_detail["hit " + p.at("kind").get<std::string>()];
        if (rec == "verdict") ++by_detail[p.at("target").get<std::string>() + " " + p.at("verdict").get<std::string>()];
        if (rec == "family") ++by_detail["family " + p.at("family").get<std::string>()];
        if (rec == "pair_report") by_detail["inconclusive curves"] += p.at("inconclusive").size();
        if (rec == "classification") ++by_detail["class " + p.at("classification").at("class").get<std::string>()];
    }
    std::size_t total = 0;
    std::printf("%-32s %10s\n", "record", "count");
    for (const auto& [k, v] : by_record) {
        std::printf("%-32s %10zu\n", k.c_str(), v);
        total += v;
    }
    std::printf("%-32s %10zu\n", "total", total);
    if (!by_detail.empty()) {
        std::printf("\n%-32s %10s\n", "detail", "count");
        for (const auto& [k, v] : by_detail) std::printf("%-32s %10zu\n", k.c_str(), v);
    }
    verify(total == lines, "report totals disagree with the line count");
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bi-perfect cuboid search and certification"};
    app.require_subcommand(1);
    // global options may also follow the subcommand
    app.fallthrough();
    Global g;
    app.add_option("--threads", g.threads, "OpenMP threads (0 = default)");
    app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error, off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
    app.add_option("--out", g.out, "output JSONL file (default stdout)");
    app.add_option("--cache", g.cache_dir, "descent certificate cache directory");
    app.add_flag("--wall-clock", g.wall_clock, "stamp records with the current time");
    app.add_option("--torsor-bound", g.descent.torsor_bound, "descent torsor search box");
    app.add_option("--naive-bound", g.descent.naive_bound, "descent naive point search bound");

    std::uint64_t p_max = 0, block = 512, p_min = 2;
    std::string resume, from_hits, kind = "both", target, family, hits_file, n, u, w, curve_id, plinth_file;
    bool serial = false, bloom = false, squared = false, ppf = false;
    unsigned bloom_bits = 26, partitions = 1, depth = 2;
    std::optional<std::uint64_t> p, q, p_max_opt;
    std::vector<std::string> args, scale;

    auto* sfp = app.add_subcommand("scan-sfp", "SFP-collision search");
    sfp->add_option("--p-max", p_max, "largest p")->required();
    sfp->add_option("--resume", resume, "checkpoint file (created if missing)");
    sfp->add_option("--block", block, "checkpoint granularity in p");
    sfp->add_flag("--serial", serial, "disable OpenMP");
    sfp->add_flag("--bloom", bloom, "two-pass bloom-filter store");
    sfp->add_option("--bloom-bits", bloom_bits, "log2 of the filter size");
    sfp->add_option("--partitions", partitions, "bloom runs split by smallest prime of the SFP");

    auto* ec = app.add_subcommand("scan-ec", "curve-driven search");
    ec->add_option("--p-min", p_min, "smallest p");
    ec->add_option("--p-max", p_max, "largest p");
    ec->add_option("--from-hits", from_hits, "use the aspect pairs of hits in this JSONL file");
    ec->add_option("--kind", kind, "F, I or both")->check(CLI::IsMember({"F", "I", "both"}));
    ec->add_option("--depth", depth, "generator coefficient bound");

    auto* ex = app.add_subcommand("exclude", "certify prohibited aspect ratios");
    ex->add_option("target", target, "face or internal")->required()->check(CLI::IsMember({"face", "internal"}));
    ex->add_option("--p", p);
    ex->add_option("--q", q);
    ex->add_option("--p-max", p_max_opt, "all admissible pairs up to this p");

    auto* cl = app.add_subcommand("classify", "classify a cuboid; sq:N passes a squared edge");
    cl->add_option("edges", args, "a b c")->expected(3)->required();
    cl->add_flag("--squared", squared, "all three arguments are squared edges");

    auto* fa = app.add_subcommand("family", "parametric families");
    fa->add_option("family", family, "t2, t5a, t5b, saunderson or t3")
        ->required()
        ->check(CLI::IsMember({"t2", "t5a", "t5b", "saunderson", "t3"}));
    fa->add_option("--p", p);
    fa->add_option("--q", q);
    fa->add_option("--p-max", p_max_opt);

    auto* kl = app.add_subcommand("kln", "picture-frame triple quantities");
    kl->add_option("kln", args, "k l n")->expected(3)->required();
    kl->add_option("--hits", hits_file, "search this hit file for cousins");

    auto* de = app.add_subcommand("descent", "2-descent certificate for a catalog curve");
    de->add_option("curve", curve_id, "EF1..EF4, EI1..EI4, CN, T2, T5a, T5b, Face")->required();
    de->add_option("--p", p);
    de->add_option("--q", q);
    de->add_option("--n", n, "CN parameter");
    de->add_option("--u", u, "Face parameter");
    de->add_option("--w", w, "Face parameter");

    auto* vp = app.add_subcommand("verify-plinth", "check all 28 distances of a plinth");
    vp->add_option("file", plinth_file, "plinth JSON")->required();
    vp->add_option("--scale", scale, "i j: ceiling by i^2, base by j^2")->expected(2);
    vp->add_flag("--ppf", ppf, "also emit the degenerate frame");

    auto* rp = app.add_subcommand("report", "summarise a JSONL file");
    rp->add_option("file", hits_file, "JSONL file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share the exit code of inadmissible input
        return app.exit(e) == 0 ? kOk : kInadmissible;
    }

    auto logger = spdlog::stderr_color_mt("bpc");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::from_str(g.log_level));
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (*sfp) return run_scan_sfp(g, p_max, resume, block, serial, bloom, bloom_bits, partitions);
        if (*ec) {
            if (from_hits.empty() && p_max == 0) throw DomainError("scan-ec needs --p-max or --from-hits");
            return run_scan_ec(g, p_min, p_max, from_hits, kind, depth);
        }
        if (*ex) return run_exclude(g, target, p, q, p_max_opt);
        if (*cl) return run_classify(g, args, squared);
        if (*fa) return run_family(g, family, p, q, p_max_opt);
        if (*kl) return run_kln(g, args, hits_file);
        if (*de) return run_descent(g, curve_id, p, q, n, u, w);
        if (*vp) return run_verify_plinth(g, plinth_file, scale, ppf);
        if (*rp) return run_report(hits_file);
    } catch (const VerificationError& e) {
        spdlog::critical("verification failure: {}", e.what());
        return kVerification;
    } catch (const DomainError& e) {
        spdlog::error("{}", e.what());
        return kInadmissible;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return kOk;
}
