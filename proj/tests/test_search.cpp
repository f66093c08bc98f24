#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lehmer/analysis.hpp"
#include "lehmer/search.hpp"

using namespace lehmer;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Independent oracle: per-n euler_phi plus direct divisibility.
std::vector<SearchHit> oracle_scan(Natural lo, Natural hi, bool plus, bool minus) {
    std::vector<SearchHit> hits;
    for (Natural n = std::max<Natural>(lo, 2); n < hi; ++n) {
        Factorization f = factorize(n);
        Natural phi = euler_phi(f);
        if (phi == n - 1) continue;
        if (plus && (n - 1) % phi == 0)
            hits.push_back({n, HitKind::plus, (n - 1) / phi, phi, f.distinct_count(), f});
        if (minus && (n + 1) % phi == 0)
            hits.push_back({n, HitKind::minus, (n + 1) / phi, phi, f.distinct_count(), f});
    }
    return hits;
}

SearchConfig basic_config(Natural lo, Natural hi) {
    SearchConfig cfg;
    cfg.lo = lo;
    cfg.hi = hi;
    cfg.target_minus = true;
    return cfg;
}

}  // namespace

TEST_CASE("phi_sieve_segment examples") {
    CHECK(phi_sieve_segment(1, 2) == std::vector<Natural>{1});
    CHECK(phi_sieve_segment(10, 16) == std::vector<Natural>{4, 10, 4, 12, 6, 8});
    CHECK_THROWS_AS(phi_sieve_segment(0, 5), std::domain_error);
    CHECK_THROWS_AS(phi_sieve_segment(5, 5), std::domain_error);
    CHECK_THROWS_AS(phi_sieve_segment(1, 2 + kPhiSegmentCap), std::domain_error);
}

TEST_CASE("phi_sieve_segment equals per-n euler_phi") {
    std::vector<Natural> phi = phi_sieve_segment(1, 100001);
    for (Natural n = 1; n <= 100000; ++n)
        CHECK(phi[static_cast<std::size_t>(n - 1)] == euler_phi(n));

    // a window not starting at 1
    std::vector<Natural> window = phi_sieve_segment(999000, 1000000);
    for (Natural n = 999000; n < 1000000; ++n)
        CHECK(window[static_cast<std::size_t>(n - 999000)] == euler_phi(n));
}

TEST_CASE("phi_sieve_segment_full structure flags") {
    PhiSegment seg = phi_sieve_segment_full(2, 1000);
    for (Natural n = 2; n < 1000; ++n) {
        std::size_t i = static_cast<std::size_t>(n - 2);
        Factorization f = factorize(n);
        CHECK(seg.phi[i] == euler_phi(f));
        CHECK(seg.omega[i] == f.distinct_count());
        CHECK(bool(seg.square_free[i]) == f.square_free());
    }
}

TEST_CASE("search_range minus hits match the oracle") {
    std::vector<SearchHit> oracle = oracle_scan(2, 100000, false, true);
    REQUIRE(oracle.size() == 3);
    CHECK(oracle[0].n == 15);
    CHECK(oracle[1].n == 255);
    CHECK(oracle[2].n == 65535);
    for (const SearchHit& h : oracle) CHECK(h.m == 2);

    SearchResult result = search_range(basic_config(2, 100000));
    CHECK(result.hits == oracle);
    CHECK(result.finished);
    CHECK(result.candidates_scanned == 99998);
}

TEST_CASE("search_range window and plus cases") {
    SearchResult small = search_range(basic_config(2, 100));
    REQUIRE(small.hits.size() == 1);
    CHECK(small.hits[0].n == 15);
    CHECK(small.hits[0].m == 2);
    CHECK(small.hits[0].phi == 8);

    SearchConfig plus_cfg;
    plus_cfg.lo = 2;
    plus_cfg.hi = 100000;
    plus_cfg.target_plus = true;
    CHECK(search_range(plus_cfg).hits.empty());

    SearchConfig both = basic_config(2, 300);
    both.target_plus = true;
    std::vector<SearchHit> oracle = oracle_scan(2, 300, true, true);
    CHECK(search_range(both).hits == oracle);
}

TEST_CASE("search_range worker invariance") {
    std::vector<SearchHit> reference;
    Natural scanned = 0;
    for (unsigned workers : {1u, 2u, 8u}) {
        SearchConfig cfg = basic_config(2, 100000);
        cfg.workers = workers;
        cfg.segment_size = 1 << 13;  // many segments so scheduling actually varies
        SearchResult result = search_range(cfg);
        if (workers == 1) {
            reference = result.hits;
            scanned = result.candidates_scanned;
        } else {
            CHECK(result.hits == reference);
            CHECK(result.candidates_scanned == scanned);
        }
    }
}

TEST_CASE("search_range filters") {
    // filter soundness: filtered output equals unfiltered restricted
    SearchConfig cfg = basic_config(2, 100000);
    std::vector<SearchHit> unfiltered = search_range(cfg).hits;

    cfg.filters.odd_only = true;
    cfg.filters.square_free_only = true;
    std::vector<SearchHit> filtered = search_range(cfg).hits;

    std::vector<SearchHit> restricted;
    for (const SearchHit& h : unfiltered)
        if (h.n % 2 == 1 && h.factors.square_free()) restricted.push_back(h);
    CHECK(filtered == restricted);
    CHECK(filtered.size() == 3);  // all three minus hits are odd and square-free

    cfg.filters.min_omega = 4;
    std::vector<SearchHit> deep = search_range(cfg).hits;
    REQUIRE(deep.size() == 1);
    CHECK(deep[0].n == 65535);
}

TEST_CASE("search_range validation") {
    SearchConfig cfg;
    cfg.lo = 10;
    cfg.hi = 10;
    cfg.target_minus = true;
    CHECK_THROWS_AS(search_range(cfg), std::domain_error);
    cfg.hi = 100;
    cfg.workers = 0;
    CHECK_THROWS_AS(search_range(cfg), std::domain_error);
    cfg.workers = 1;
    cfg.target_minus = false;
    CHECK_THROWS_AS(search_range(cfg), std::domain_error);
    cfg.target_minus = true;
    cfg.segment_size = 1;
    CHECK_THROWS_AS(search_range(cfg), std::domain_error);
}

TEST_CASE("deep-range minus solution beyond the Fermat ladder") {
    // the first composite solution past 4294967295's little siblings:
    // 83623935 = 3*5*17*353*929, phi = 41811968, (n+1)/phi = 2
    SearchConfig cfg = basic_config(83000000, 84000000);
    cfg.workers = 2;
    SearchResult result = search_range(cfg);
    REQUIRE(result.hits.size() == 1);
    CHECK(result.hits[0].n == 83623935);
    CHECK(result.hits[0].m == 2);
    CHECK(result.hits[0].factors.to_string() == "3*5*17*353*929");

    // independent route: direct factorization arithmetic
    CHECK(minus_check(83623935) == Natural(2));
    CHECK(euler_phi(Natural(83623935)) == 41811968);
}

TEST_CASE("fermat_products") {
    std::vector<SearchHit> hits = fermat_products();
    REQUIRE(hits.size() == 4);  // 3 itself is prime, excluded
    const Natural expected_n[] = {15, 255, 65535, 4294967295ULL};
    const Natural expected_omega[] = {2, 3, 4, 5};
    for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].n == expected_n[i]);
        CHECK(hits[i].kind == HitKind::minus);
        CHECK(hits[i].m == 2);
        CHECK(hits[i].omega == expected_omega[i]);
        CHECK(hits[i].phi == euler_phi(expected_n[i]));
    }
}

TEST_CASE("hit line round-trip") {
    std::vector<SearchHit> hits = oracle_scan(2, 70000, true, true);
    hits.push_back(fermat_products().back());
    for (const SearchHit& h : hits) {
        SearchHit parsed = parse_hit(format_hit(h));
        CHECK(parsed == h);
    }
    CHECK_THROWS(parse_hit("hit n=x kind=minus m=2 phi=8 omega=2 factors=3*5"));
    CHECK_THROWS(parse_hit("done 2 100"));
}

TEST_CASE("checkpoint round-trip") {
    Checkpoint cp;
    cp.config_digest = "0123456789abcdef";
    cp.lo = 2;
    cp.hi = 1000000;
    cp.segment_size = 65536;
    cp.completed = {{2, 65538}, {65538, 131074}};
    cp.hits = oracle_scan(2, 300, false, true);
    cp.wall_seconds = 1.25;

    std::string path = temp_path("lehmer_cp_roundtrip.txt");
    checkpoint_save(cp, path);
    Checkpoint loaded = checkpoint_load(path);
    CHECK(loaded == cp);

    // byte-exact: saving the loaded checkpoint reproduces the file
    std::string path2 = temp_path("lehmer_cp_roundtrip2.txt");
    checkpoint_save(loaded, path2);
    std::ifstream f1(path), f2(path2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("checkpoint corrupt files name the offending field") {
    std::string path = temp_path("lehmer_cp_corrupt.txt");
    {
        std::ofstream out(path);
        out << "lehmer-search-checkpoint v1 digest=abc lo=2 hi=100 segment=10\n";
        out << "done 2 twelve\n";
        out << "wall 0\n";
    }
    try {
        checkpoint_load(path);
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("done") != std::string::npos);
    }
    {
        std::ofstream out(path);
        out << "lehmer-search-checkpoint v1 digest=abc lo=2 hi=100 segment=10\n";
        out << "done 2 12\n";  // no wall line
    }
    try {
        checkpoint_load(path);
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("wall") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("resume after interruption yields identical hits") {
    std::string path = temp_path("lehmer_cp_resume.txt");
    std::filesystem::remove(path);

    SearchConfig cfg = basic_config(2, 300000);
    cfg.segment_size = 1 << 14;  // 19 segments
    cfg.workers = 2;

    SearchResult uninterrupted = search_range(cfg);
    REQUIRE(uninterrupted.finished);

    cfg.checkpoint_path = path;
    cfg.max_segments_per_run = 5;
    SearchResult partial = search_range(cfg);
    CHECK_FALSE(partial.finished);
    CHECK(partial.segments_done == 5);

    cfg.max_segments_per_run = 0;
    SearchResult resumed = search_range(cfg);
    CHECK(resumed.finished);
    CHECK(resumed.hits == uninterrupted.hits);

    // running again over a complete checkpoint is a no-op with the same hits
    SearchResult again = search_range(cfg);
    CHECK(again.hits == uninterrupted.hits);
    std::filesystem::remove(path);
}

TEST_CASE("digest mismatch refuses to resume") {
    std::string path = temp_path("lehmer_cp_mismatch.txt");
    std::filesystem::remove(path);

    SearchConfig cfg = basic_config(2, 50000);
    cfg.segment_size = 1 << 14;
    cfg.checkpoint_path = path;
    cfg.max_segments_per_run = 1;
    search_range(cfg);

    cfg.hi = 60000;  // different range, different digest
    CHECK_THROWS_AS(search_range(cfg), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("output file carries the hit list") {
    std::string path = temp_path("lehmer_hits.txt");
    SearchConfig cfg = basic_config(2, 100000);
    cfg.output_path = path;
    SearchResult result = search_range(cfg);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<SearchHit> from_file;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) from_file.push_back(parse_hit(line));
    CHECK(from_file == result.hits);
    std::filesystem::remove(path);
}

TEST_CASE("config digest covers the searched shape") {
    SearchConfig a = basic_config(2, 100000);
    SearchConfig b = a;
    CHECK(config_digest(a) == config_digest(b));
    b.hi = 100001;
    CHECK(config_digest(a) != config_digest(b));
    b = a;
    b.filters.odd_only = true;
    CHECK(config_digest(a) != config_digest(b));
    b = a;
    b.target_plus = true;
    CHECK(config_digest(a) != config_digest(b));
    // workers must NOT affect the digest: resuming with more cores is fine
    b = a;
    b.workers = 16;
    CHECK(config_digest(a) == config_digest(b));
}
