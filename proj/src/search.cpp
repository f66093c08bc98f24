#include "lehmer/search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lehmer/numeric.hpp"
#include "lehmer/primes.hpp"

namespace lehmer {

const char* to_string(HitKind kind) { return kind == HitKind::plus ? "plus" : "minus"; }

namespace {

struct SegmentData {
    std::vector<Natural> phi;
    std::vector<Natural> rem;
    std::vector<std::uint8_t> omega;
    std::vector<std::uint8_t> square_free;
};

// Sieve phi over [lo, hi) by peeling prime powers off each entry.
// track_structure additionally records omega and square-freeness.
SegmentData sieve_segment(Natural lo, Natural hi, bool track_structure) {
    if (lo < 1) throw std::domain_error("phi_sieve_segment: lo must be >= 1");
    if (hi <= lo) throw std::domain_error("phi_sieve_segment: hi must exceed lo");
    if (hi - lo > kPhiSegmentCap)
        throw std::domain_error("phi_sieve_segment: range exceeds segment cap");

    std::size_t count = static_cast<std::size_t>(hi - lo);
    SegmentData data;
    data.phi.assign(count, 1);
    data.rem.resize(count);
    for (std::size_t i = 0; i < count; ++i) data.rem[i] = lo + i;
    if (track_structure) {
        data.omega.assign(count, 0);
        data.square_free.assign(count, 1);
    }

    Natural sqrt_hi = isqrt(hi - 1);
    visit_primes(2, sqrt_hi + 1, [&](Natural p) {
        Natural rem0 = lo % p;
        Natural first = rem0 == 0 ? lo : lo + (p - rem0);
        if (first < lo) return;  // wrapped past 2^64
        for (Natural m = first; m < hi;) {
            std::size_t i = static_cast<std::size_t>(m - lo);
            Natural value = data.rem[i] / p;
            Natural contrib = p - 1;
            unsigned exponent = 1;
            while (value % p == 0) {
                value /= p;
                contrib *= p;
                ++exponent;
            }
            data.rem[i] = value;
            data.phi[i] *= contrib;
            if (track_structure) {
                ++data.omega[i];
                if (exponent > 1) data.square_free[i] = 0;
            }
            Natural next = m + p;
            if (next < m) break;
            m = next;
        }
    });
    for (std::size_t i = 0; i < count; ++i) {
        if (data.rem[i] > 1) {
            data.phi[i] *= data.rem[i] - 1;  // leftover prime > sqrt(hi-1)
            if (track_structure) ++data.omega[i];
        }
    }
    return data;
}

struct SegmentScan {
    std::vector<SearchHit> hits;
    Natural candidates = 0;
};

SegmentScan scan_segment(Natural lo, Natural hi, const SearchConfig& cfg) {
    Natural base = std::max<Natural>(lo, 2);
    if (base >= hi) return {};  // nothing at or above 2 in this segment
    bool need_structure = cfg.filters.square_free_only || cfg.filters.min_omega > 0;
    SegmentData data = sieve_segment(base, hi, need_structure);

    SegmentScan scan;
    for (Natural n = base; n < hi; ++n) {
        ++scan.candidates;
        std::size_t i = static_cast<std::size_t>(n - base);
        Natural phi = data.phi[i];
        if (phi == n - 1) continue;  // prime
        if (cfg.filters.odd_only && n % 2 == 0) continue;
        if (need_structure) {
            if (cfg.filters.square_free_only && !data.square_free[i]) continue;
            if (data.omega[i] < cfg.filters.min_omega) continue;
        }
        bool plus_hit = cfg.target_plus && (n - 1) % phi == 0;
        bool minus_hit = cfg.target_minus && n < ~Natural(0) && (n + 1) % phi == 0;
        if (!plus_hit && !minus_hit) continue;

        Factorization f = factorize(n);
        if (plus_hit) {
            scan.hits.push_back({n, HitKind::plus, (n - 1) / phi, phi,
                                 f.distinct_count(), f});
        }
        if (minus_hit) {
            scan.hits.push_back({n, HitKind::minus, (n + 1) / phi, phi,
                                 f.distinct_count(), f});
        }
    }
    return scan;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string double_to_text(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void write_hits_file(const std::string& path, const std::vector<SearchHit>& hits) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        for (const SearchHit& h : hits) out << format_hit(h) << '\n';
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::vector<Natural> phi_sieve_segment(Natural lo, Natural hi) {
    return sieve_segment(lo, hi, /*track_structure=*/false).phi;
}

PhiSegment phi_sieve_segment_full(Natural lo, Natural hi) {
    SegmentData data = sieve_segment(lo, hi, /*track_structure=*/true);
    PhiSegment seg;
    seg.lo = lo;
    seg.phi = std::move(data.phi);
    seg.omega = std::move(data.omega);
    seg.square_free = std::move(data.square_free);
    return seg;
}

std::string config_digest(const SearchConfig& cfg) {
    std::ostringstream os;
    os << cfg.lo << '|' << cfg.hi << '|' << cfg.segment_size << '|'
       << (cfg.target_plus ? 'p' : '-') << (cfg.target_minus ? 'm' : '-') << '|'
       << cfg.filters.odd_only << cfg.filters.square_free_only << '|'
       << cfg.filters.min_omega;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(os.str())));
    return buf;
}

std::string format_hit(const SearchHit& hit) {
    std::ostringstream os;
    os << "hit n=" << hit.n << " kind=" << to_string(hit.kind) << " m=" << hit.m
       << " phi=" << hit.phi << " omega=" << hit.omega
       << " factors=" << hit.factors.to_string();
    return os.str();
}

namespace {

Natural parse_natural_field(const std::string& token, const char* field,
                            const std::string& context) {
    Natural value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw std::runtime_error("checkpoint parse error: bad field '" +
                                 std::string(field) + "' in: " + context);
    return value;
}

std::string expect_field(std::istringstream& in, const char* key,
                         const std::string& context) {
    std::string token;
    if (!(in >> token) || token.rfind(std::string(key) + "=", 0) != 0)
        throw std::runtime_error("checkpoint parse error: missing field '" +
                                 std::string(key) + "' in: " + context);
    return token.substr(std::string(key).size() + 1);
}

}  // namespace

SearchHit parse_hit(const std::string& line) {
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    if (tag != "hit") throw std::runtime_error("hit parse error: not a hit line: " + line);
    SearchHit hit;
    hit.n = parse_natural_field(expect_field(in, "n", line), "n", line);
    std::string kind = expect_field(in, "kind", line);
    if (kind == "plus")
        hit.kind = HitKind::plus;
    else if (kind == "minus")
        hit.kind = HitKind::minus;
    else
        throw std::runtime_error("hit parse error: bad field 'kind' in: " + line);
    hit.m = parse_natural_field(expect_field(in, "m", line), "m", line);
    hit.phi = parse_natural_field(expect_field(in, "phi", line), "phi", line);
    hit.omega = parse_natural_field(expect_field(in, "omega", line), "omega", line);

    std::string token;
    if (!(in >> token) || token.rfind("factors=", 0) != 0)
        throw std::runtime_error("hit parse error: missing field 'factors' in: " + line);
    std::string spec = token.substr(8);
    std::istringstream fs(spec);
    std::string part;
    while (std::getline(fs, part, '*')) {
        auto caret = part.find('^');
        Natural prime = parse_natural_field(part.substr(0, caret), "factors", line);
        unsigned exp = 1;
        if (caret != std::string::npos)
            exp = static_cast<unsigned>(
                parse_natural_field(part.substr(caret + 1), "factors", line));
        hit.factors.factors.push_back({prime, exp});
    }
    return hit;
}

void checkpoint_save(const Checkpoint& cp, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open checkpoint file: " + tmp);
        out << "lehmer-search-checkpoint v1 digest=" << cp.config_digest
            << " lo=" << cp.lo << " hi=" << cp.hi << " segment=" << cp.segment_size
            << '\n';
        for (const SegmentRange& s : cp.completed)
            out << "done " << s.lo << ' ' << s.hi << '\n';
        for (const SearchHit& h : cp.hits) out << format_hit(h) << '\n';
        out << "wall " << double_to_text(cp.wall_seconds) << '\n';
        if (!out.flush()) throw std::runtime_error("checkpoint write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);  // atomic replace
}

Checkpoint checkpoint_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
    Checkpoint cp;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("checkpoint parse error: empty file: " + path);
    {
        std::istringstream hs(line);
        std::string magic, version;
        hs >> magic >> version;
        if (magic != "lehmer-search-checkpoint" || version != "v1")
            throw std::runtime_error("checkpoint parse error: bad field 'header' in: " + line);
        cp.config_digest = expect_field(hs, "digest", line);
        cp.lo = parse_natural_field(expect_field(hs, "lo", line), "lo", line);
        cp.hi = parse_natural_field(expect_field(hs, "hi", line), "hi", line);
        cp.segment_size =
            parse_natural_field(expect_field(hs, "segment", line), "segment", line);
    }
    bool saw_wall = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "done") {
            std::string a, b;
            if (!(ls >> a >> b))
                throw std::runtime_error(
                    "checkpoint parse error: bad field 'done' in: " + line);
            cp.completed.push_back({parse_natural_field(a, "done.lo", line),
                                    parse_natural_field(b, "done.hi", line)});
        } else if (tag == "hit") {
            cp.hits.push_back(parse_hit(line));
        } else if (tag == "wall") {
            std::string w;
            if (!(ls >> w))
                throw std::runtime_error(
                    "checkpoint parse error: bad field 'wall' in: " + line);
            double value = 0;
            auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
            if (ec != std::errc() || ptr != w.data() + w.size())
                throw std::runtime_error(
                    "checkpoint parse error: bad field 'wall' in: " + line);
            cp.wall_seconds = value;
            saw_wall = true;
        } else {
            throw std::runtime_error("checkpoint parse error: unknown record: " + line);
        }
    }
    if (!saw_wall)
        throw std::runtime_error("checkpoint parse error: missing field 'wall': " + path);
    return cp;
}

SearchResult search_range(const SearchConfig& cfg, const ProgressFn& progress) {
    if (cfg.lo >= cfg.hi) throw std::domain_error("search_range: lo must be < hi");
    if (cfg.segment_size < 2) throw std::domain_error("search_range: segment_size < 2");
    if (cfg.segment_size > kPhiSegmentCap)
        throw std::domain_error("search_range: segment_size exceeds cap");
    if (cfg.workers < 1) throw std::domain_error("search_range: workers must be >= 1");
    if (!cfg.target_plus && !cfg.target_minus)
        throw std::domain_error("search_range: no targets selected");

    const std::string digest = config_digest(cfg);

    // segment layout is fixed by (lo, hi, segment_size)
    std::vector<SegmentRange> segments;
    for (Natural lo = cfg.lo; lo < cfg.hi;) {
        Natural hi = cfg.hi - lo > cfg.segment_size ? lo + cfg.segment_size : cfg.hi;
        segments.push_back({lo, hi});
        if (hi == cfg.hi) break;
        lo = hi;
    }

    Checkpoint cp;
    cp.config_digest = digest;
    cp.lo = cfg.lo;
    cp.hi = cfg.hi;
    cp.segment_size = cfg.segment_size;
    std::set<std::pair<Natural, Natural>> done;
    if (cfg.checkpoint_path && std::filesystem::exists(*cfg.checkpoint_path)) {
        cp = checkpoint_load(*cfg.checkpoint_path);
        if (cp.config_digest != digest)
            throw std::runtime_error(
                "checkpoint digest mismatch: refusing to resume (checkpoint " +
                cp.config_digest + ", config " + digest + ")");
        for (const SegmentRange& s : cp.completed) done.insert({s.lo, s.hi});
    }

    std::vector<const SegmentRange*> todo;
    for (const SegmentRange& s : segments)
        if (!done.count({s.lo, s.hi})) todo.push_back(&s);
    unsigned budget = cfg.max_segments_per_run == 0
                          ? static_cast<unsigned>(todo.size())
                          : std::min<unsigned>(cfg.max_segments_per_run,
                                               static_cast<unsigned>(todo.size()));
    todo.resize(budget);

    std::vector<SegmentScan> results(todo.size());
    std::atomic<std::size_t> next{0};
    std::atomic<Natural> candidates{0};

    std::mutex done_mutex;
    unsigned done_count = static_cast<unsigned>(done.size());
    auto started = std::chrono::steady_clock::now();
    std::exception_ptr first_error;

    auto worker = [&]() {
        try {
            for (;;) {
                std::size_t index = next.fetch_add(1);
                if (index >= todo.size()) return;
                const SegmentRange& seg = *todo[index];
                SegmentScan scan = scan_segment(seg.lo, seg.hi, cfg);
                candidates += scan.candidates;

                std::lock_guard<std::mutex> lock(done_mutex);
                results[index] = std::move(scan);
                cp.completed.push_back(seg);
                for (const SearchHit& h : results[index].hits) cp.hits.push_back(h);
                ++done_count;
                double elapsed = std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
                if (cfg.checkpoint_path) {
                    Checkpoint snapshot = cp;
                    snapshot.wall_seconds += elapsed;  // base carries prior runs
                    checkpoint_save(snapshot, *cfg.checkpoint_path);
                }
                if (progress)
                    progress(done_count, static_cast<unsigned>(segments.size()),
                             elapsed > 0
                                 ? static_cast<double>(candidates.load()) / elapsed
                                 : 0.0);
            }
        } catch (...) {
            // surface the failure after join; completed checkpoints stay valid
            std::lock_guard<std::mutex> lock(done_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(todo.size());  // drain remaining work
        }
    };

    unsigned thread_count =
        std::min<unsigned>(cfg.workers, std::max<std::size_t>(todo.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < thread_count; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    SearchResult result;
    result.segments_total = static_cast<unsigned>(segments.size());
    result.segments_done = done_count;
    result.finished = done_count == segments.size();
    result.candidates_scanned = candidates.load();
    result.wall_seconds = cp.wall_seconds + elapsed;

    // deterministic order: ascending n regardless of worker interleaving
    result.hits = cp.hits;
    std::sort(result.hits.begin(), result.hits.end(),
              [](const SearchHit& a, const SearchHit& b) {
                  return a.n != b.n ? a.n < b.n : a.kind < b.kind;
              });

    if (cfg.checkpoint_path) {
        cp.wall_seconds = result.wall_seconds;
        checkpoint_save(cp, *cfg.checkpoint_path);
    }
    if (cfg.output_path) write_hits_file(*cfg.output_path, result.hits);
    return result;
}

std::vector<SearchHit> fermat_products() {
    const Natural fermat_primes[] = {3, 5, 17, 257, 65537};
    std::vector<SearchHit> hits;
    Natural n = 1;
    Natural phi = 1;
    for (Natural p : fermat_primes) {
        n = checked_mul(n, p);
        phi = checked_mul(phi, p - 1);
        bool composite = phi != n - 1;
        if (!composite) continue;
        if ((n + 1) % phi != 0) continue;
        Factorization f = factorize(n);
        hits.push_back({n, HitKind::minus, (n + 1) / phi, phi, f.distinct_count(), f});
    }
    return hits;
}

}  // namespace lehmer
