#pragma once

#include "aem/bounds.hpp"
#include "aem/memory_model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace aem {

struct MergePlan {
    Count lambda = 1;
    Count fanout = 0;          // l = lambda*M/B
    Count levels = 0;          // ceil(log_l(n/B))
};

MergePlan make_merge_plan(const MemoryConfig& cfg, Count n);

// Per-merge instrumentation for the round-progress invariant.
struct MergeStats {
    std::vector<Count> emitted_per_round;
};

// Lemma-4 base case: sorts n <= lambda*M records in ceil(n/M) scans using
// at most lambda*ceil(n/B) reads and exactly ceil(n/B) writes, with an
// M + B working set.
ExtArray<Record> selection_sort_base(Sim& sim, ExtSlice<Record> input);

// Phase-level variant: emit is called once per scan with that phase's
// sorted records (still resident in the arena working set).  Used by the
// array-producing wrapper above and by distribution-sort base cases.
void selection_sort_emit(Sim& sim, ExtSlice<Record> input,
                         const std::function<void(std::span<const Record>)>& emit,
                         bool descending = false);

// Merges l <= lambda*M/B sorted block-aligned runs (Lemma 3).
ExtArray<Record> merge_l_ways(Sim& sim, const std::vector<ExtSlice<Record>>& runs,
                              MergeStats* stats = nullptr);

// AEM-Mergesort driver (Theorem 5 bounds).
ExtArray<Record> aem_mergesort(Sim& sim, const ExtArray<Record>& input);

} // namespace aem
