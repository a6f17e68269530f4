#include "aem/samplesort.hpp"

#include "aem/block_io.hpp"
#include "aem/mergesort.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace aem {

namespace {

Count log2_ceil(Count n) {
    Count lg = 0;
    while ((Count(1) << lg) < n) ++lg;
    return lg;
}

ExtArray<Record> sort_sample(Sim& sim, ExtArray<Record>& sample, std::mt19937_64& rng,
                             SampleSortStats* stats, Count depth);

void sample_sort_rec(Sim& sim, ExtSlice<Record> input, BlockWriter& writer,
                     std::mt19937_64& rng, Count n0, SampleSortStats* stats, Count depth);

} // namespace

Count samplesort_fanout(const MemoryConfig& cfg, Count n) {
    Count lm = cfg.lambda * cfg.mem_records;
    if (n <= lm * lm / cfg.block_records) return std::max<Count>(2, ceil_div(n, lm));
    return cfg.fanout();
}

SplitterSet select_splitters(Sim& sim, ExtSlice<Record> input, Count l, Count n0,
                             std::mt19937_64& rng) {
    const MemoryConfig& cfg = sim.config();
    const Count n = input.length;
    if (l < 2) throw ConfigError("splitter selection needs l >= 2");

    Count m = 8 * l * std::max<Count>(1, log2_ceil(std::max<Count>(2, n0)));
    if (m > n) m = n;

    // One streaming pass picking a uniform m-subset in index order.
    ExtArray<Record> sample(sim, m);
    {
        BlockWriter sw(sample, sim.arena());
        auto load = sim.arena().alloc<Record>(cfg.block_records);
        Count chosen = 0, seen = 0;
        for (Count blk = 0; blk < input.block_count(); ++blk) {
            input.read_block(blk, load.span());
            Count k = input.records_in_block(blk);
            for (Count j = 0; j < k && chosen < m; ++j, ++seen) {
                // Select with probability (m - chosen) / (n - seen).
                Count remaining = n - seen;
                if (rng() % remaining < m - chosen) {
                    sw.push(load[j]);
                    ++chosen;
                }
            }
            if (chosen == m) break;
        }
        assert(chosen == m);
        sw.flush();
    }

    ExtArray<Record> sorted = sort_sample(sim, sample, rng, nullptr, 0);

    SplitterSet out{ExtArray<Record>(sim, l - 1), l, m};
    {
        BlockWriter sw(out.splitters, sim.arena());
        auto load = sim.arena().alloc<Record>(cfg.block_records);
        Count last_blk = static_cast<Count>(-1);
        for (Count i = 1; i < l; ++i) {
            Count pos = i * m / l;
            if (pos >= m) pos = m - 1;
            Count blk = pos / cfg.block_records;
            if (blk != last_blk) {
                sorted.read_block(blk, load.span());
                last_blk = blk;
            }
            sw.push(load[pos % cfg.block_records]);
        }
        sw.flush();
    }
    return out;
}

std::vector<ExtArray<Record>> partition_rounds(Sim& sim, ExtSlice<Record> input,
                                               const SplitterSet& ss) {
    const MemoryConfig& cfg = sim.config();
    const Count b = cfg.block_records;
    const Count per_round = cfg.mem_records / b;  // bucket blocks resident per round
    const Count l = ss.fanout;
    const Count rounds = ceil_div(l, per_round);

    std::vector<ExtArray<Record>> buckets;
    buckets.reserve(l);
    for (Count j = 0; j < l; ++j) buckets.emplace_back(sim, 0);

    auto bucket_space = sim.arena().alloc<Record>(cfg.mem_records);
    auto split_buf = sim.arena().alloc<Record>(per_round);
    auto load = sim.arena().alloc<Record>(b);
    std::vector<Count> fill(per_round, 0);

    for (Count r = 0; r < rounds; ++r) {
        // Round r serves buckets [lo_b, hi_b).  Bucket j spans
        // (splitter[j-1], splitter[j]]; the topmost bucket has no upper
        // splitter, so the round keeps hi_b - lo_b bucket blocks but at most
        // that many minus one resident splitters.
        Count lo_b = r * per_round;
        Count hi_b = std::min(l, lo_b + per_round);
        Count nbuckets = hi_b - lo_b;
        Count resident = std::min(hi_b, l - 1) - lo_b;

        if (resident > 0) {
            Count first_blk = lo_b / b;
            Count last_blk = (lo_b + resident - 1) / b;
            auto tmp = sim.arena().alloc<Record>(b);
            for (Count blk = first_blk; blk <= last_blk; ++blk) {
                ss.splitters.read_block(blk, tmp.span());
                Count cnt = ss.splitters.records_in_block(blk);
                for (Count j = 0; j < cnt; ++j) {
                    Count idx = blk * b + j;
                    if (idx >= lo_b && idx < lo_b + resident) split_buf[idx - lo_b] = tmp[j];
                }
            }
        }
        // Lower fence: the last splitter of the previous round, carried over
        // in memory (one scalar, covered by the stack allowance).
        Record fence{};
        bool have_fence = lo_b > 0;
        if (have_fence) fence = ss.splitters.peek(lo_b - 1);

        std::fill(fill.begin(), fill.end(), 0);

        for (Count blk = 0; blk < input.block_count(); ++blk) {
            input.read_block(blk, load.span());
            Count k = input.records_in_block(blk);
            for (Count j = 0; j < k; ++j) {
                const Record& rec = load[j];
                ++sim.comparisons;
                if (have_fence && !record_less(fence, rec)) continue;  // earlier round
                // Count resident splitters strictly below rec; a record equal
                // to splitter j stays in bucket j (ranges are half-open at
                // the bottom).
                Count pos = std::lower_bound(split_buf.data(), split_buf.data() + resident,
                                             rec,
                                             [&](const Record& s, const Record& x) {
                                                 ++sim.comparisons;
                                                 return record_less(s, x);
                                             }) -
                            split_buf.data();
                if (pos == resident && hi_b != l) continue;  // later round
                assert(pos < nbuckets);
                Record* seg = bucket_space.data() + pos * b;
                seg[fill[pos]++] = rec;
                if (fill[pos] == b) {
                    std::span<const Record> full(seg, b);
                    buckets[lo_b + pos].append_block(full, load.span());
                    fill[pos] = 0;
                }
            }
        }
        for (Count local = 0; local < nbuckets; ++local) {
            if (fill[local] == 0) continue;
            std::span<const Record> seg(bucket_space.data() + local * b, fill[local]);
            buckets[lo_b + local].append_block(seg, load.span());
            fill[local] = 0;
        }
    }
    return buckets;
}

namespace {

ExtArray<Record> sort_sample(Sim& sim, ExtArray<Record>& sample, std::mt19937_64& rng,
                             SampleSortStats* stats, Count depth) {
    const MemoryConfig& cfg = sim.config();
    if (sample.length() <= cfg.lambda * cfg.mem_records)
        return selection_sort_base(sim, ExtSlice<Record>(sample));
    ExtArray<Record> out(sim, sample.length());
    BlockWriter writer(out, sim.arena());
    sample_sort_rec(sim, ExtSlice<Record>(sample), writer, rng, sample.length(), stats,
                    depth);
    writer.flush();
    return out;
}

void sample_sort_rec(Sim& sim, ExtSlice<Record> input, BlockWriter& writer,
                     std::mt19937_64& rng, Count n0, SampleSortStats* stats, Count depth) {
    const MemoryConfig& cfg = sim.config();
    if (stats && depth > stats->max_depth) stats->max_depth = depth;
    if (input.length == 0) return;
    if (input.length <= cfg.lambda * cfg.mem_records) {
        selection_sort_emit(sim, input, [&](std::span<const Record> phase) {
            for (const Record& r : phase) writer.push(r);
        });
        return;
    }
    Count l = samplesort_fanout(cfg, input.length);
    SplitterSet ss = select_splitters(sim, input, l, n0, rng);
    auto buckets = partition_rounds(sim, input, ss);
    for (auto& bucket : buckets) {
        sample_sort_rec(sim, ExtSlice<Record>(bucket), writer, rng, n0, stats, depth + 1);
        bucket = ExtArray<Record>(sim, 0);  // drop before the next sibling
    }
}

} // namespace

ExtArray<Record> aem_samplesort(Sim& sim, const ExtArray<Record>& input,
                                std::uint64_t seed, SampleSortStats* stats) {
    std::mt19937_64 rng(seed ^ 0xa5a5a5a5deadbeefull);
    ExtArray<Record> out(sim, input.length());
    if (input.length() == 0) return out;
    BlockWriter writer(out, sim.arena());
    sample_sort_rec(sim, ExtSlice<Record>(input), writer, rng, input.length(), stats, 0);
    writer.flush();
    return out;
}

} // namespace aem
