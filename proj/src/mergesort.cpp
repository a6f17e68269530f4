#include "aem/mergesort.hpp"

#include "aem/block_io.hpp"
#include "aem/minmax_heap.hpp"

#include <algorithm>
#include <cassert>

namespace aem {

MergePlan make_merge_plan(const MemoryConfig& cfg, Count n) {
    MergePlan p;
    p.lambda = cfg.lambda;
    p.fanout = cfg.fanout();
    p.levels = bounds::merge_levels(n, cfg.mem_records, cfg.block_records, cfg.lambda);
    return p;
}

void selection_sort_emit(Sim& sim, ExtSlice<Record> input,
                         const std::function<void(std::span<const Record>)>& emit,
                         bool descending) {
    const MemoryConfig& cfg = sim.config();
    const Count n = input.length;
    if (n == 0) return;
    if (n > cfg.lambda * cfg.mem_records)
        throw ConfigError("selection sort base case called with n > lambda*M");

    auto ws_buf = sim.arena().alloc<Record>(cfg.mem_records);
    auto load = sim.arena().alloc<Record>(cfg.block_records);

    // In descending mode the comparison is reversed: phases extract the
    // largest remaining records and emit them largest-first.
    auto lt = [&](const Record& a, const Record& b) {
        ++sim.comparisons;
        return descending ? record_less(b, a) : record_less(a, b);
    };

    std::vector<Record> ws;  // max-heap of the current phase's keepers
    ws.reserve(cfg.mem_records);
    std::optional<Record> watermark;  // last record emitted so far
    Count emitted = 0;

    while (emitted < n) {
        // One full scan: keep the M smallest records past the watermark.
        ws.clear();
        for (Count blk = 0; blk < input.block_count(); ++blk) {
            input.read_block(blk, load.span());
            Count k = input.records_in_block(blk);
            for (Count j = 0; j < k; ++j) {
                const Record& r = load[j];
                if (watermark && !lt(*watermark, r)) continue;
                if (ws.size() < cfg.mem_records) {
                    ws.push_back(r);
                    std::push_heap(ws.begin(), ws.end(), lt);
                } else if (lt(r, ws.front())) {
                    std::pop_heap(ws.begin(), ws.end(), lt);
                    ws.back() = r;
                    std::push_heap(ws.begin(), ws.end(), lt);
                }
            }
        }
        std::sort(ws.begin(), ws.end(), lt);
        emit(std::span<const Record>(ws.data(), ws.size()));
        emitted += ws.size();
        assert(!ws.empty());
        watermark = ws.back();
    }
}

ExtArray<Record> selection_sort_base(Sim& sim, ExtSlice<Record> input) {
    ExtArray<Record> out(sim, input.length);
    if (input.length == 0) return out;
    // Every phase except the last holds exactly M records and M is a
    // multiple of B, so phase output stays block-aligned and the blocks are
    // written straight out of the working set: no store buffer needed.
    Count next_block = 0;
    const Count b = sim.config().block_records;
    selection_sort_emit(sim, input, [&](std::span<const Record> phase) {
        for (Count off = 0; off < phase.size(); off += b) {
            Count k = std::min<Count>(b, phase.size() - off);
            out.write_block(next_block++, phase.subspan(off, k));
        }
    });
    return out;
}

namespace {

struct MergeItem {
    Record rec;
    std::uint32_t run;
    bool last_in_block;
};

// The merge's bounded priority structure.  Phase 1 only inserts and ejects
// the maximum, so a flat max-heap serves; at the phase switch the survivors
// are sorted once and phase 2 consumes them by index, merging in the small
// bursts that arrive when a run advances to its next block.  Any in-memory
// representation is free in the model; this one keeps the simulation fast.
class RoundQueue {
public:
    RoundQueue(Count capacity, Count* comparisons)
        : m_(capacity), comparisons_(comparisons), less_{comparisons} {
        heap_.reserve(m_ + 1);
        main_.reserve(m_ + 1);
        inc_.reserve(m_ + 1);
        merged_.reserve(m_ + 1);
    }

    void start_round() {
        heap_.clear();
        main_.clear();
        inc_.clear();
        pending_.clear();
        mi_ = ii_ = 0;
        draining_ = false;
    }

    Count size() const {
        if (!draining_) return heap_.size();
        return (main_.size() - mi_) + (inc_.size() - ii_) + pending_.size();
    }
    bool full() const { return size() == m_; }
    bool empty() const { return size() == 0; }

    // Phase-1 insert; caller has already applied the window filter.
    void insert_fill(const MergeItem& e) {
        if (heap_.size() == m_) {
            std::pop_heap(heap_.begin(), heap_.end(), less_);
            heap_.back() = e;
            std::push_heap(heap_.begin(), heap_.end(), less_);
        } else {
            heap_.push_back(e);
            std::push_heap(heap_.begin(), heap_.end(), less_);
        }
    }

    void start_drain() {
        main_ = std::move(heap_);
        heap_.clear();
        std::sort(main_.begin(), main_.end(), less_);
        mi_ = 0;
        inc_.clear();
        ii_ = 0;
        draining_ = true;
    }

    // Phase-2 insert into the burst staging list (ascending within a block).
    void insert_drain(const MergeItem& e) { pending_.push_back(e); }

    void eject_max() {
        if (!draining_) {
            std::pop_heap(heap_.begin(), heap_.end(), less_);
            heap_.pop_back();
            return;
        }
        int which = max_source();
        assert(which >= 0);
        if (which == 0)
            main_.pop_back();
        else if (which == 1)
            inc_.pop_back();
        else
            pending_.pop_back();
    }

    const Record& max_rec() const {
        if (!draining_) return heap_.front().rec;
        int which = max_source();
        assert(which >= 0);
        if (which == 0) return main_.back().rec;
        if (which == 1) return inc_.back().rec;
        return pending_.back().rec;
    }

    // Folds the current burst into the incoming lane.
    void settle_burst() {
        if (pending_.empty()) return;
        if (ii_ == inc_.size()) {
            inc_ = std::move(pending_);
            pending_.clear();
            ii_ = 0;
        } else {
            merged_.clear();
            std::merge(inc_.begin() + ii_, inc_.end(), pending_.begin(), pending_.end(),
                       std::back_inserter(merged_), less_);
            inc_.swap(merged_);
            ii_ = 0;
            pending_.clear();
        }
    }

    MergeItem pop_min() {
        assert(pending_.empty());
        bool have_main = mi_ < main_.size();
        bool have_inc = ii_ < inc_.size();
        assert(have_main || have_inc);
        if (have_main && (!have_inc || less_(main_[mi_], inc_[ii_]))) return main_[mi_++];
        return inc_[ii_++];
    }

private:
    struct Less {
        Count* comparisons;
        bool operator()(const MergeItem& a, const MergeItem& b) const {
            ++*comparisons;
            return record_less(a.rec, b.rec);
        }
    };

    // 0 = main tail, 1 = incoming tail, 2 = burst tail, -1 = empty.
    int max_source() const {
        int which = -1;
        const Record* best = nullptr;
        if (mi_ < main_.size()) {
            which = 0;
            best = &main_.back().rec;
        }
        if (ii_ < inc_.size() && (!best || less_raw(*best, inc_.back().rec))) {
            which = 1;
            best = &inc_.back().rec;
        }
        if (!pending_.empty() && (!best || less_raw(*best, pending_.back().rec))) {
            which = 2;
        }
        return which;
    }
    bool less_raw(const Record& a, const Record& b) const {
        ++*comparisons_;
        return record_less(a, b);
    }

    Count m_;
    Count* comparisons_;
    Less less_;
    std::vector<MergeItem> heap_, main_, inc_, pending_, merged_;
    std::size_t mi_ = 0, ii_ = 0;
    bool draining_ = false;
};

} // namespace

ExtArray<Record> merge_l_ways(Sim& sim, const std::vector<ExtSlice<Record>>& runs,
                              MergeStats* stats) {
    const MemoryConfig& cfg = sim.config();
    const Count b = cfg.block_records;
    const Count m = cfg.mem_records;
    const Count l = runs.size();
    if (l > cfg.fanout()) throw ConfigError("merge given more runs than lambda*M/B");

    Count n = 0;
    for (const auto& r : runs) n += r.length;
    ExtArray<Record> out(sim, n);
    if (n == 0) return out;

    // Lemma-3 working space: the size-M queue, a load buffer and a store
    // buffer, plus one cursor and one end-tag slot per run.
    auto q_space = sim.arena().alloc<Record>(m);
    (void)q_space;  // capacity charge; the queue entries live below
    auto load = sim.arena().alloc<Record>(b);
    auto cursor_space = sim.arena().alloc<Count>(l);
    auto tag_space = sim.arena().alloc<Count>(l);
    (void)tag_space;  // charge for the last-in-block markers carried in Q
    BlockWriter writer(out, sim.arena());

    RoundQueue queue(m, &sim.comparisons);
    std::span<Count> cursor = cursor_space.span();
    for (Count i = 0; i < l; ++i) cursor[i] = 0;

    std::optional<Record> last_emitted;          // per-pop watermark
    std::optional<Record> round_bound;           // Q.max, frozen once Q fills
    Count emitted = 0;

    auto cmp_lt = [&](const Record& a, const Record& b2) {
        ++sim.comparisons;
        return record_less(a, b2);
    };

    // Reads the cursor block of run i and inserts every record inside the
    // round window (lastV, Q.max).  When Q is full the insert ejects the
    // maximum; an end tag lost that way is re-derived when the block is
    // re-read in a later round.
    auto process_block = [&](Count i, bool draining) {
        const ExtSlice<Record>& run = runs[i];
        if (cursor[i] >= run.block_count()) return;
        run.read_block(cursor[i], load.span());
        Count k = run.records_in_block(cursor[i]);
        for (Count j = 0; j < k; ++j) {
            const Record& r = load[j];
            assert(j == 0 || !record_less(r, load[j - 1]));  // runs must be sorted
            if (last_emitted && !cmp_lt(*last_emitted, r)) continue;
            if (round_bound && !cmp_lt(r, *round_bound)) continue;
            MergeItem item{r, static_cast<std::uint32_t>(i), j + 1 == k};
            bool was_full = queue.full();
            if (was_full) queue.eject_max();
            if (draining)
                queue.insert_drain(item);
            else
                queue.insert_fill(item);
            if (queue.full()) round_bound = queue.max_rec();
        }
        if (draining) queue.settle_burst();
    };

    while (emitted < n) {
        Count at_round_start = emitted;
        round_bound.reset();
        queue.start_round();
        for (Count i = 0; i < l; ++i) process_block(i, false);
        queue.start_drain();
        while (!queue.empty()) {
            MergeItem e = queue.pop_min();
            writer.push(e.rec);
            ++emitted;
            last_emitted = e.rec;
            if (e.last_in_block) {
                ++cursor[e.run];
                process_block(e.run, true);
            }
        }
        Count this_round = emitted - at_round_start;
        if (stats) stats->emitted_per_round.push_back(this_round);
        // Every round except the last must emit at least M records.
        assert(this_round >= std::min<Count>(m, n - at_round_start));
        if (this_round == 0) throw std::logic_error("merge made no progress");
    }
    writer.flush();
    assert(writer.written() == n);
    return out;
}

namespace {

ExtArray<Record> sort_slice(Sim& sim, ExtSlice<Record> input) {
    const MemoryConfig& cfg = sim.config();
    if (input.length <= cfg.lambda * cfg.mem_records)
        return selection_sort_base(sim, input);

    const Count l = cfg.fanout();
    const Count nb = input.block_count();
    std::vector<ExtArray<Record>> sorted;
    sorted.reserve(l);
    // Even split at block granularity; every child except possibly the one
    // holding the global tail is whole-block sized.
    for (Count g = 0; g < l; ++g) {
        Count first = g * nb / l;
        Count last = (g + 1) * nb / l;
        if (first == last) continue;
        Count start_rec = first * cfg.block_records;
        Count len = std::min(input.length, last * cfg.block_records) - start_rec;
        ExtSlice<Record> child(*input.arr, input.first_block + first, len);
        sorted.push_back(sort_slice(sim, child));
    }
    std::vector<ExtSlice<Record>> runs;
    runs.reserve(sorted.size());
    for (const auto& a : sorted) runs.emplace_back(a);
    return merge_l_ways(sim, runs);
}

} // namespace

ExtArray<Record> aem_mergesort(Sim& sim, const ExtArray<Record>& input) {
    return sort_slice(sim, ExtSlice<Record>(input));
}

} // namespace aem
