#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lehmer/arith.hpp"

namespace lehmer {

enum class HitKind { plus, minus };

const char* to_string(HitKind kind);

// A composite n with n - m*phi(n) = +1 (plus) or -1 (minus).
struct SearchHit {
    Natural n = 0;
    HitKind kind = HitKind::minus;
    Natural m = 0;
    Natural phi = 0;
    Natural omega = 0;
    Factorization factors;

    bool operator==(const SearchHit&) const = default;
};

struct SearchFilters {
    bool odd_only = false;
    bool square_free_only = false;
    Natural min_omega = 0;

    bool any() const { return odd_only || square_free_only || min_omega > 0; }
    bool operator==(const SearchFilters&) const = default;
};

struct SearchConfig {
    Natural lo = 2;
    Natural hi = 0;  // exclusive
    Natural segment_size = Natural(1) << 20;
    unsigned workers = 1;
    bool target_plus = false;
    bool target_minus = false;
    SearchFilters filters;
    std::optional<std::string> checkpoint_path;
    std::optional<std::string> output_path;
    // Stop after this many newly completed segments (0 = run to the end).
    // Lets an operator bound a work chunk; resuming from the checkpoint
    // finishes the range with an identical hit list.
    unsigned max_segments_per_run = 0;
};

struct SegmentRange {
    Natural lo = 0;
    Natural hi = 0;

    bool operator==(const SegmentRange&) const = default;
};

struct Checkpoint {
    std::string config_digest;
    Natural lo = 0;
    Natural hi = 0;
    Natural segment_size = 0;
    std::vector<SegmentRange> completed;
    std::vector<SearchHit> hits;
    double wall_seconds = 0;

    bool operator==(const Checkpoint&) const = default;
};

struct SearchResult {
    std::vector<SearchHit> hits;  // ascending n
    Natural candidates_scanned = 0;
    unsigned segments_total = 0;
    unsigned segments_done = 0;  // includes segments restored from checkpoint
    bool finished = false;
    double wall_seconds = 0;  // cumulative across resumed runs
};

// progress(segments_done, segments_total, candidates_per_second)
using ProgressFn = std::function<void(unsigned, unsigned, double)>;

inline constexpr Natural kPhiSegmentCap = Natural(1) << 24;

// Entry i holds phi(lo + i), sieved with base primes <= sqrt(hi-1).
std::vector<Natural> phi_sieve_segment(Natural lo, Natural hi);

// Like phi_sieve_segment but also reports distinct-prime counts and square
// flags, for filtered scans.
struct PhiSegment {
    Natural lo = 0;
    std::vector<Natural> phi;
    std::vector<std::uint8_t> omega;
    std::vector<std::uint8_t> square_free;
};
PhiSegment phi_sieve_segment_full(Natural lo, Natural hi);

SearchResult search_range(const SearchConfig& cfg, const ProgressFn& progress = {});

// The five products of the first j known Fermat primes, minus-checked in
// exact integer arithmetic; composite solutions returned (all with m = 2).
std::vector<SearchHit> fermat_products();

std::string config_digest(const SearchConfig& cfg);

void checkpoint_save(const Checkpoint& cp, const std::string& path);
Checkpoint checkpoint_load(const std::string& path);

std::string format_hit(const SearchHit& hit);
SearchHit parse_hit(const std::string& line);

}  // namespace lehmer
