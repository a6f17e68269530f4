#pragma once

#include "aem/common.hpp"

#include <vector>

namespace aem {

// Word-granularity counters for the RAM/PRAM setting.  One record move and
// one pointer/flag store each count as a single word write; in-register
// arithmetic is free.
struct WordCounters {
    Count word_reads = 0;
    Count word_writes = 0;
    Count cost(Count omega) const { return word_reads + omega * word_writes; }
};

// Sorts by inserting into a red-black tree (O(1) amortized restructuring
// writes per insert) and reading the records off in order: O(n log n) reads,
// O(n) writes.
std::vector<Record> ram_tree_sort(const std::vector<Record>& input, WordCounters& wc);

struct PramSortStats {
    Count sample_size = 0;
    Count buckets = 0;
    Count placement_tries = 0;   // step-4 attempts, successes included
    Count max_tries_one_record = 0;
};

struct PramSortConfig {
    Count slot_constant = 4;     // c in the c*log^2(n) bucket arrays
    std::uint64_t seed = 1;
};

// Sequential simulation of the randomized PRAM sample sort: sample with
// probability 1/log n, sort the sample, binary-search each record's bucket,
// place into bucket arrays by random probing, pack, then tree-sort each
// bucket.  Placement failure after c*log n tries on one record throws.
std::vector<Record> pram_sample_sort_sim(const std::vector<Record>& input,
                                         const PramSortConfig& cfg, WordCounters& wc,
                                         PramSortStats* stats = nullptr);

} // namespace aem
