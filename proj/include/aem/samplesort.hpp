#pragma once

#include "aem/memory_model.hpp"

#include <random>
#include <vector>

namespace aem {

struct SplitterSet {
    ExtArray<Record> splitters;  // l-1 records, strictly increasing
    Count fanout = 0;            // l
    Count sample_size = 0;       // m
};

struct SampleSortStats {
    Count max_depth = 0;
};

// Bucket count for a subproblem: lambda*M/B, except near the base where
// n <= (lambda*M)^2/B switches to l = ceil(n/(lambda*M)) so that
// l <= sqrt(n/B) always holds.
Count samplesort_fanout(const MemoryConfig& cfg, Count n);

// Arena for a whole sample-sort run.  The partition phase itself needs
// M + B + M/B records and the base case M + B; on top of that the driver
// keeps the output stream's block and up to three nested sample-writer
// blocks live across the recursion.
inline Count samplesort_arena_capacity(const MemoryConfig& cfg) {
    return cfg.mem_records + cfg.aux_slack + 4 * cfg.block_records;
}

// Draws a sorted m-subset of the input by one streaming scan, sorts it, and
// sub-selects the l-1 evenly spaced splitter records.  n0 is the original
// input size (the sample is Theta(l log n0)).
SplitterSet select_splitters(Sim& sim, ExtSlice<Record> input, Count l, Count n0,
                             std::mt19937_64& rng);

// Distributes the input into l buckets in ceil((l-1)/(M/B)) scan rounds of
// M/B resident splitters each; one arena block per active bucket.
std::vector<ExtArray<Record>> partition_rounds(Sim& sim, ExtSlice<Record> input,
                                               const SplitterSet& splitters);

ExtArray<Record> aem_samplesort(Sim& sim, const ExtArray<Record>& input,
                                std::uint64_t seed, SampleSortStats* stats = nullptr);

} // namespace aem
