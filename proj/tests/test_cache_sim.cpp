#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aem/cache_sim.hpp"

#include <list>
#include <random>

using namespace aem;

namespace {

// Plain single-pool LRU miss counter, the reference for read-only traces.
struct RefLru {
    Count lines;
    std::list<Count> order;
    Count misses = 0;

    explicit RefLru(Count lines) : lines(lines) {}
    void touch(Count block) {
        for (auto it = order.begin(); it != order.end(); ++it) {
            if (*it == block) {
                order.erase(it);
                order.push_front(block);
                return;
            }
        }
        ++misses;
        if (order.size() == lines) order.pop_back();
        order.push_front(block);
    }
};

} // namespace

TEST_CASE("read path: cold miss, hit, pathological cycle") {
    AsymCache cache(4, 16);
    TracedArray<Record> arr(cache, 16 * 16);

    arr.get(0);
    CHECK(cache.io().block_reads == 1);
    arr.get(5);  // same block
    CHECK(cache.io().block_reads == 1);

    // Cycling over pool+1 distinct blocks misses on every access once warm.
    Count before = cache.io().block_reads;
    for (int pass = 0; pass < 3; ++pass)
        for (Count b = 0; b < 5; ++b) arr.get(b * 16);
    // First pass: 5 compulsory misses (block 0 already resident -> 4).
    // After warm-up, LRU on a cyclic trace misses every time.
    CHECK(cache.io().block_reads == before + 4 + 10);
    CHECK(cache.io().block_writes == 0);
}

TEST_CASE("write path costs") {
    SUBCASE("write miss allocates: one read, no write yet") {
        AsymCache cache(4, 16);
        TracedArray<Record> arr(cache, 256);
        arr.set(0, Record{1, 0, 0});
        CHECK(cache.io().block_reads == 1);
        CHECK(cache.io().block_writes == 0);
    }
    SUBCASE("dirty eviction pays one block write at eviction time") {
        AsymCache cache(2, 16);
        TracedArray<Record> arr(cache, 16 * 8);
        arr.set(0 * 16, Record{1, 0, 0});
        arr.set(1 * 16, Record{2, 0, 0});
        CHECK(cache.io().block_writes == 0);
        arr.set(2 * 16, Record{3, 0, 0});  // evicts a dirty block
        CHECK(cache.io().block_reads == 3);
        CHECK(cache.io().block_writes == 1);
    }
    SUBCASE("write then flush is one read and one write") {
        AsymCache cache(4, 16);
        TracedArray<Record> arr(cache, 64);
        arr.set(3, Record{9, 0, 0});
        cache.flush_all();
        CHECK(cache.io().block_reads == 1);
        CHECK(cache.io().block_writes == 1);
    }
}

TEST_CASE("flush_all") {
    AsymCache cache(8, 16);
    TracedArray<Record> arr(cache, 16 * 8);

    SUBCASE("empty cache costs nothing") {
        cache.flush_all();
        CHECK(cache.io().block_writes == 0);
    }
    SUBCASE("k dirty blocks cost k writes") {
        for (Count b = 0; b < 5; ++b) arr.set(b * 16, Record{});
        cache.flush_all();
        CHECK(cache.io().block_writes == 5);
    }
    SUBCASE("clean blocks flush for free") {
        for (Count b = 0; b < 5; ++b) arr.get(b * 16);
        Count r = cache.io().block_reads;
        cache.flush_all();
        CHECK(cache.io().block_reads == r);
        CHECK(cache.io().block_writes == 0);
    }
}

TEST_CASE("read hit in the write pool keeps the dirty obligation") {
    AsymCache cache(2, 16);
    TracedArray<Record> arr(cache, 256);
    arr.set(0, Record{7, 1, 0});
    Count reads = cache.io().block_reads;
    CHECK(arr.get(0).key == 7);  // served from the write pool, no transfer
    CHECK(cache.io().block_reads == reads);
    cache.flush_all();
    CHECK(cache.io().block_writes == 1);  // the pending write-back survived
}

TEST_CASE("read-only traces match classic LRU (10^4 random traces)") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 10000; ++t) {
        Count lines = 1 + rng() % 8;
        Count blocks = 1 + rng() % 12;
        Count len = 1 + rng() % 60;
        AsymCache cache(lines, 4);
        TracedArray<Record> arr(cache, blocks * 4);
        RefLru ref(lines);
        for (Count i = 0; i < len; ++i) {
            Count b = rng() % blocks;
            arr.get(b * 4);
            ref.touch(b);
        }
        REQUIRE(cache.io().block_reads == ref.misses);
        REQUIRE(cache.io().block_writes == 0);
    }
}

TEST_CASE("dirty conservation and per-event pool invariants") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        Count lines = 1 + rng() % 6;
        AsymCache cache(lines, 4);
        cache.enable_trace(true);
        Count blocks = 1 + rng() % 10;
        TracedArray<Record> arr(cache, blocks * 4);
        std::set<Count> written;
        // Distinct-block writes in a single sweep never re-load an evicted
        // dirty block, so writes after flush equal distinct blocks written.
        for (Count b = 0; b < blocks; ++b) {
            if (rng() % 2) {
                arr.set(b * 4, Record{});
                written.insert(b);
            } else {
                arr.get(b * 4);
            }
            CHECK(cache.read_pool_size() <= lines);
            CHECK(cache.write_pool_size() <= lines);
        }
        cache.flush_all();
        CHECK(cache.io().block_writes == written.size());

        // Every dirty eviction in the log adds exactly one block write.
        Count dirty_evicts = 0;
        for (const auto& e : cache.trace())
            if (e.event == CacheEvent::evict_dirty) ++dirty_evicts;
        CHECK(dirty_evicts == cache.io().block_writes);
    }
}

TEST_CASE("trace replay is deterministic") {
    auto run = [] {
        AsymCache cache(3, 8);
        cache.enable_trace(true);
        TracedArray<Record> arr(cache, 8 * 10);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 300; ++i) {
            Count idx = rng() % arr.length();
            if (rng() % 3 == 0)
                arr.set(idx, Record{static_cast<std::int64_t>(i), 0, 0});
            else
                arr.get(idx);
        }
        cache.flush_all();
        std::string log;
        for (const auto& e : cache.trace()) log += trace_line(e) + "\n";
        return log;
    };
    CHECK(run() == run());
}
