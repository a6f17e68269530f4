#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aem/bounds.hpp"
#include "aem/input_gen.hpp"
#include "aem/mergesort.hpp"

#include <algorithm>

using namespace aem;

namespace {

std::vector<Record> oracle_sort(std::vector<Record> v) {
    std::sort(v.begin(), v.end(), RecordLess{});
    return v;
}

} // namespace

TEST_CASE("merge level formula") {
    // n = 2^20, M = 1024, B = 32, lambda = 4: fanout 128, n/B = 2^15, 128^2 < 2^15 <= 128^3.
    CHECK(bounds::merge_levels(1 << 20, 1024, 32, 4) == 3);
    CHECK(bounds::mergesort_bound(1 << 20, 1024, 32, 4).writes == 98304);
    CHECK(bounds::merge_levels(1 << 20, 1024, 32, 1) == 3);  // 32^3 = 32768 = n/B
    CHECK(bounds::merge_levels((1 << 20) + 1, 1024, 32, 1) == 4);
    CHECK(bounds::merge_levels(32, 1024, 32, 1) == 0);  // n <= B
}

TEST_CASE("selection sort base case (Lemma 4)") {
    SUBCASE("empty input costs nothing") {
        auto cfg = MemoryConfig::make(1024, 32, 4, 4);
        Sim sim(cfg);
        ExtArray<Record> in(sim, 0);
        auto out = selection_sort_base(sim, ExtSlice<Record>(in));
        CHECK(out.length() == 0);
        CHECK(sim.io().block_reads == 0);
        CHECK(sim.io().block_writes == 0);
    }
    SUBCASE("n <= M is a single pass") {
        auto cfg = MemoryConfig::make(1024, 32, 4, 4);
        Sim sim(cfg);
        auto in = generate_input(sim, 1000, Distribution::uniform, 11);
        auto out = selection_sort_base(sim, ExtSlice<Record>(in));
        CHECK(sim.io().block_reads == ceil_div(1000, 32));
        CHECK(sim.io().block_writes == ceil_div(1000, 32));
        CHECK(oracle_sort(in.peek_all()) == out.peek_all());
    }
    SUBCASE("boundary n = lambda*M under strict arena M + B") {
        const Count m = 1024, b = 32, lambda = 4;
        auto cfg = MemoryConfig::make(m, b, 16, lambda);
        for (Count n : {lambda * m, lambda * m - 1}) {
            Sim sim(cfg, ArenaMode::strict, m + b);
            auto in = generate_input(sim, n, Distribution::uniform, 23);
            auto out = selection_sort_base(sim, ExtSlice<Record>(in));
            auto want = bounds::selection_sort_bound(n, b, lambda);
            CHECK(sim.io().block_reads <= want.reads);
            CHECK(sim.io().block_writes == want.writes);
            CHECK(sim.arena().peak_use() <= m + b);
            CHECK(oracle_sort(in.peek_all()) == out.peek_all());
        }
    }
    SUBCASE("input too large is rejected") {
        auto cfg = MemoryConfig::make(64, 8, 2, 2);
        Sim sim(cfg);
        ExtArray<Record> in(sim, 2 * 64 + 1);
        CHECK_THROWS_AS(selection_sort_base(sim, ExtSlice<Record>(in)), ConfigError);
    }
    SUBCASE("descending emit reverses the order") {
        auto cfg = MemoryConfig::make(64, 8, 4, 2);
        Sim sim(cfg);
        auto in = generate_input(sim, 100, Distribution::uniform, 5);
        std::vector<Record> got;
        selection_sort_emit(
            sim, ExtSlice<Record>(in),
            [&](std::span<const Record> phase) { got.insert(got.end(), phase.begin(), phase.end()); },
            /*descending=*/true);
        auto want = oracle_sort(in.peek_all());
        std::reverse(want.begin(), want.end());
        CHECK(got == want);
    }
}

TEST_CASE("merge_l_ways (Lemma 3)") {
    const Count m = 256, b = 16, lambda = 2;
    auto cfg = MemoryConfig::make(m, b, 8, lambda);

    SUBCASE("single run is a bounded copy") {
        Sim sim(cfg);
        auto raw = make_records(m, Distribution::uniform, 3);
        ExtArray<Record> run(sim, 0);
        run.fill_unmetered(oracle_sort(raw));
        auto out = merge_l_ways(sim, {ExtSlice<Record>(run)});
        auto want = bounds::merge_bound(m, b, lambda);
        CHECK(sim.io().block_reads <= want.reads);
        CHECK(sim.io().block_writes == want.writes);
        CHECK(out.peek_all() == oracle_sort(raw));
    }
    SUBCASE("l sorted runs merge within the read/write bound") {
        Sim sim(cfg);
        const Count l = cfg.fanout();
        std::vector<ExtArray<Record>> runs;
        std::vector<Record> all;
        for (Count i = 0; i < l; ++i) {
            auto raw = make_records(3 * b, Distribution::uniform, 100 + i);
            all.insert(all.end(), raw.begin(), raw.end());
            runs.emplace_back(sim, 0);
            runs.back().fill_unmetered(oracle_sort(raw));
        }
        std::vector<ExtSlice<Record>> slices(runs.begin(), runs.end());
        MergeStats stats;
        auto out = merge_l_ways(sim, slices, &stats);

        Count n = all.size();
        auto want = bounds::merge_bound(n, b, lambda);
        CHECK(sim.io().block_reads <= want.reads);
        CHECK(sim.io().block_writes == want.writes);
        CHECK(out.peek_all() == oracle_sort(all));
        // Lemma 3's memory claim, with one cursor and one tag slot per run.
        CHECK(sim.arena().peak_use() <= m + 2 * b + 2 * cfg.fanout());
        // Round progress: every round except the last emits >= M records.
        for (std::size_t r = 0; r + 1 < stats.emitted_per_round.size(); ++r)
            CHECK(stats.emitted_per_round[r] >= m);
    }
    SUBCASE("more runs than the fanout is an error") {
        Sim sim(cfg);
        std::vector<ExtArray<Record>> runs;
        for (Count i = 0; i < cfg.fanout() + 1; ++i) runs.emplace_back(sim, 0);
        std::vector<ExtSlice<Record>> slices(runs.begin(), runs.end());
        CHECK_THROWS_AS(merge_l_ways(sim, slices), ConfigError);
    }
}

TEST_CASE("aem_mergesort sorts and meets Theorem 5 bounds") {
    for (Count lambda : {Count(1), Count(2), Count(4)}) {
        for (auto dist : all_distributions()) {
            auto cfg = MemoryConfig::make(256, 16, 4, lambda);
            Sim sim(cfg);
            const Count n = 20000;
            auto in = generate_input(sim, n, dist, 42 + lambda);
            auto out = aem_mergesort(sim, in);
            auto want = bounds::mergesort_bound(n, 256, 16, lambda);
            CAPTURE(lambda);
            CAPTURE(to_string(dist));
            CHECK(sim.io().block_reads <= want.reads);
            CHECK(sim.io().block_writes <= want.writes);
            CHECK(out.peek_all() == oracle_sort(in.peek_all()));
        }
    }
}

TEST_CASE("replay determinism") {
    auto run_once = [] {
        auto cfg = MemoryConfig::make(128, 16, 8, 2);
        Sim sim(cfg);
        auto in = generate_input(sim, 5000, Distribution::uniform, 99);
        auto out = aem_mergesort(sim, in);
        return std::tuple{sim.io().block_reads, sim.io().block_writes,
                          multiset_fingerprint(out.peek_all())};
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("choose_lambda (Appendix A)") {
    SUBCASE("inequality check at omega=16, M/B=32") {
        CHECK(bounds::branch_factor_admissible(8, 16, 1024, 32));
        CHECK_FALSE(bounds::branch_factor_admissible(16, 16, 1024, 32));
    }
    SUBCASE("no asymmetry means classic mergesort") {
        auto pick = bounds::choose_lambda(1, 1024, 32, 1 << 20);
        CHECK(pick.lambda == 1);
    }
    SUBCASE("never worse than lambda = 1") {
        for (Count omega : {Count(2), Count(4), Count(8), Count(16)}) {
            for (Count n : {Count(1) << 14, Count(1) << 17, Count(1) << 20}) {
                auto pick = bounds::choose_lambda(omega, 512, 16, n);
                Count cost1 = (omega + 1 + 1) * ceil_div(n, 16) *
                              bounds::merge_levels(n, 512, 16, 1);
                CHECK(pick.lambda >= 1);
                CHECK(pick.lambda <= omega);
                CHECK(pick.total_cost <= cost1);
            }
        }
    }
}
