#pragma once

#include "aem/common.hpp"
#include "aem/memory_model.hpp"

#include <random>
#include <string>
#include <vector>

namespace aem {

enum class Distribution { uniform, sorted, reverse, few_distinct, adversarial_skew };

inline const char* to_string(Distribution d) {
    switch (d) {
        case Distribution::uniform: return "uniform";
        case Distribution::sorted: return "sorted";
        case Distribution::reverse: return "reverse";
        case Distribution::few_distinct: return "few-distinct";
        case Distribution::adversarial_skew: return "adversarial-skew";
    }
    return "?";
}

inline Distribution parse_distribution(const std::string& s) {
    if (s == "uniform") return Distribution::uniform;
    if (s == "sorted") return Distribution::sorted;
    if (s == "reverse") return Distribution::reverse;
    if (s == "few-distinct") return Distribution::few_distinct;
    if (s == "adversarial-skew") return Distribution::adversarial_skew;
    throw ConfigError("unknown distribution: " + s);
}

inline std::vector<Distribution> all_distributions() {
    return {Distribution::uniform, Distribution::sorted, Distribution::reverse,
            Distribution::few_distinct, Distribution::adversarial_skew};
}

// Deterministic per (n, dist, seed).  Keys may repeat; the tiebreak (the
// original index) makes records unique.
inline std::vector<Record> make_records(Count n, Distribution dist, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Record> out(n);
    std::uniform_int_distribution<std::int64_t> wide(-(1ll << 62), 1ll << 62);
    for (Count i = 0; i < n; ++i) {
        Record& r = out[i];
        r.tiebreak = i;
        r.payload = rng();
        switch (dist) {
            case Distribution::uniform:
                r.key = wide(rng);
                break;
            case Distribution::sorted:
                r.key = static_cast<std::int64_t>(i);
                break;
            case Distribution::reverse:
                r.key = static_cast<std::int64_t>(n - i);
                break;
            case Distribution::few_distinct:
                r.key = static_cast<std::int64_t>(rng() % 4);
                break;
            case Distribution::adversarial_skew:
                // 90% of the keys crowd a narrow band, the rest spread wide.
                if (rng() % 10 != 0)
                    r.key = static_cast<std::int64_t>(rng() % (n / 64 + 1));
                else
                    r.key = wide(rng);
                break;
        }
    }
    return out;
}

inline ExtArray<Record> generate_input(Sim& sim, Count n, Distribution dist,
                                       std::uint64_t seed) {
    ExtArray<Record> arr(sim, n);
    auto recs = make_records(n, dist, seed);
    arr.fill_unmetered(recs);
    return arr;
}

// Order-independent fingerprint for permutation checks.
inline std::uint64_t multiset_fingerprint(const std::vector<Record>& recs) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    std::uint64_t acc = 0;
    for (const Record& r : recs)
        acc += mix(static_cast<std::uint64_t>(r.key) * 0x100000001b3ull + r.tiebreak);
    return acc;
}

inline bool is_sorted_run(const std::vector<Record>& recs) {
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (record_less(recs[i], recs[i - 1])) return false;
    return true;
}

} // namespace aem
