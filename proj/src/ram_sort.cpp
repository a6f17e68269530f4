#include "aem/ram_sort.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace aem {

namespace {

constexpr std::uint32_t NIL = 0;  // slot 0 is the sentinel

// Index-based red-black tree.  Word counting conventions: a record moves as
// one word; every link or color store is one word write; nodes come zeroed
// from the allocator, so the all-zero state {no children, red} costs
// nothing to establish.  The descent path lives in the O(log n) stack
// locations the model grants for free, so nodes carry no parent fields.
struct RbTree {
    struct Node {
        Record rec;
        std::uint32_t left, right;
        bool black;
    };
    std::vector<Node> nodes;
    std::vector<std::uint32_t> path;  // stack allowance, unmetered
    std::uint32_t root = NIL;
    WordCounters& wc;

    explicit RbTree(WordCounters& wc, std::size_t hint) : wc(wc) {
        nodes.reserve(hint + 1);
        nodes.push_back(Node{Record{}, NIL, NIL, true});
    }

    std::uint32_t& child(std::uint32_t n, bool left) {
        return left ? nodes[n].left : nodes[n].right;
    }

    // Rotates x (whose parent is p, or the root when p == NIL) toward dir.
    // Three link stores; the root pointer update counts as one more.
    std::uint32_t rotate(std::uint32_t p, std::uint32_t x, bool left_rotate) {
        std::uint32_t y = child(x, !left_rotate);
        wc.word_reads += 1;
        std::uint32_t beta = child(y, left_rotate);
        wc.word_reads += 1;
        child(x, !left_rotate) = beta;
        child(y, left_rotate) = x;
        wc.word_writes += 2;
        if (p == NIL) {
            root = y;
        } else {
            child(p, nodes[p].left == x) = y;
            wc.word_reads += 1;
        }
        wc.word_writes += 1;
        return y;
    }

    void insert(const Record& rec) {
        std::uint32_t idx = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back(Node{rec, NIL, NIL, false});
        wc.word_writes += 1;  // the record move; links and color arrive zeroed

        path.clear();
        std::uint32_t x = root;
        while (x != NIL) {
            path.push_back(x);
            wc.word_reads += 2;  // key fetch + child link
            x = record_less(rec, nodes[x].rec) ? nodes[x].left : nodes[x].right;
        }
        if (path.empty()) {
            root = idx;
            wc.word_writes += 1;
            nodes[idx].black = true;
            wc.word_writes += 1;
            return;
        }
        std::uint32_t parent = path.back();
        wc.word_reads += 1;
        child(parent, record_less(rec, nodes[parent].rec)) = idx;
        wc.word_writes += 1;

        // Bottom-up fixup along the recorded path.
        std::uint32_t z = idx;
        while (!path.empty()) {
            std::uint32_t p = path.back();
            wc.word_reads += 1;
            if (nodes[p].black) break;
            // p is red, so it cannot be the root; the grandparent exists.
            assert(path.size() >= 2);
            std::uint32_t g = path[path.size() - 2];
            bool p_is_left = nodes[g].left == p;
            wc.word_reads += 2;
            std::uint32_t u = child(g, !p_is_left);
            if (u != NIL && !nodes[u].black) {
                nodes[p].black = true;
                nodes[u].black = true;
                wc.word_writes += 2;
                if (g == root) return;  // the root stays black
                nodes[g].black = false;
                wc.word_writes += 1;
                z = g;
                path.pop_back();
                path.pop_back();
                continue;
            }
            std::uint32_t gp = path.size() >= 3 ? path[path.size() - 3] : NIL;
            if (child(p, !p_is_left) == z) {
                rotate(g, p, p_is_left);
                std::swap(p, z);
            }
            nodes[p].black = true;
            nodes[g].black = false;
            wc.word_writes += 2;
            rotate(gp, g, !p_is_left);
            return;
        }
        if (!nodes[root].black) {
            nodes[root].black = true;
            wc.word_writes += 1;
        }
    }

    void inorder(std::vector<Record>& out) {
        path.clear();
        std::uint32_t cur = root;
        while (cur != NIL || !path.empty()) {
            while (cur != NIL) {
                path.push_back(cur);
                wc.word_reads += 1;
                cur = nodes[cur].left;
            }
            cur = path.back();
            path.pop_back();
            out.push_back(nodes[cur].rec);
            wc.word_reads += 2;  // record + right link
            wc.word_writes += 1;
            cur = nodes[cur].right;
        }
    }
};

Count floor_log2(Count n) {
    Count lg = 0;
    while ((Count(2) << lg) <= n) ++lg;
    return lg;
}

void tree_sort_into(const Record* first, Count n, std::vector<Record>& out,
                    WordCounters& wc) {
    RbTree tree(wc, n);
    for (Count i = 0; i < n; ++i) {
        wc.word_reads += 1;
        tree.insert(first[i]);
    }
    tree.inorder(out);
}

} // namespace

std::vector<Record> ram_tree_sort(const std::vector<Record>& input, WordCounters& wc) {
    std::vector<Record> out;
    out.reserve(input.size());
    tree_sort_into(input.data(), input.size(), out, wc);
    return out;
}

std::vector<Record> pram_sample_sort_sim(const std::vector<Record>& input,
                                         const PramSortConfig& cfg, WordCounters& wc,
                                         PramSortStats* stats) {
    const Count n = input.size();
    if (n <= 2) {
        auto out = input;
        std::sort(out.begin(), out.end(), RecordLess{});
        wc.word_reads += n;
        wc.word_writes += n;
        return out;
    }
    std::mt19937_64 rng(cfg.seed);
    const Count logn = std::max<Count>(1, floor_log2(n));

    // Step 1: sample each record with probability 1/log n, then sort the
    // sample with a bottom-up mergesort (O(m) writes per pass, m log m in
    // total, which is O(n) since m = Theta(n / log n)).
    std::vector<Record> sample;
    for (const Record& r : input) {
        wc.word_reads += 1;
        if (rng() % logn == 0) {
            sample.push_back(r);
            wc.word_writes += 1;
        }
    }
    if (sample.empty()) {
        sample.push_back(input[0]);
        wc.word_writes += 1;
    }
    {
        std::vector<Record> tmp(sample.size());
        for (Count width = 1; width < sample.size(); width *= 2) {
            for (Count lo = 0; lo < sample.size(); lo += 2 * width) {
                Count mid = std::min<Count>(lo + width, sample.size());
                Count hi = std::min<Count>(lo + 2 * width, sample.size());
                Count a = lo, b = mid, o = lo;
                while (a < mid || b < hi) {
                    bool take_a = b == hi || (a < mid && !record_less(sample[b], sample[a]));
                    wc.word_reads += 2;
                    tmp[o++] = take_a ? sample[a++] : sample[b++];
                    wc.word_writes += 1;
                }
            }
            sample.swap(tmp);
        }
    }

    // Step 2: every (log n)-th sample element becomes a splitter.
    std::vector<Record> splitters;
    for (Count i = logn; i < sample.size(); i += logn) {
        splitters.push_back(sample[i]);
        wc.word_reads += 1;
        wc.word_writes += 1;
    }
    const Count nbuckets = splitters.size() + 1;
    const Count slots = cfg.slot_constant * logn * logn;

    // Slot arrays come zeroed; an all-zero slot means empty (the occupancy
    // mark is folded into the stored record's tiebreak+1).
    struct Slot {
        std::uint64_t tag = 0;  // tiebreak + 1, 0 = empty
        Record rec;
    };
    std::vector<std::vector<Slot>> arrays(nbuckets);
    for (auto& a : arrays) a.resize(slots);

    // Steps 3+4: binary-search the record's bucket, then place it at a
    // random empty slot.  The sequential simulation places each record as
    // soon as its bucket is known instead of materializing the bucket-id
    // array the parallel phases communicate through.
    const Count try_cap = std::max<Count>(4, cfg.slot_constant * logn);
    for (Count i = 0; i < n; ++i) {
        const Record& r = input[i];
        Count lo = 0, hi = splitters.size();
        wc.word_reads += 1;
        while (lo < hi) {
            Count mid = (lo + hi) / 2;
            wc.word_reads += 1;
            if (record_less(splitters[mid], r))
                lo = mid + 1;
            else
                hi = mid;
        }
        auto& arr = arrays[lo];
        Count tries = 0;
        for (;;) {
            ++tries;
            if (tries > try_cap)
                throw std::runtime_error("placement failed: slot constant too small");
            Count pos = rng() % arr.size();
            wc.word_reads += 1;  // occupancy probe
            if (arr[pos].tag == 0) {
                arr[pos].tag = r.tiebreak + 1;
                arr[pos].rec = r;
                wc.word_writes += 1;  // one record move, tag folded in
                break;
            }
        }
        if (stats) {
            stats->placement_tries += tries;
            stats->max_tries_one_record = std::max(stats->max_tries_one_record, tries);
        }
    }

    // Step 5: pack out the empty cells, keeping buckets contiguous.
    std::vector<Record> packed;
    packed.reserve(n);
    std::vector<Count> bucket_start(nbuckets + 1, 0);
    for (Count bkt = 0; bkt < nbuckets; ++bkt) {
        bucket_start[bkt] = packed.size();
        for (const Slot& s : arrays[bkt]) {
            wc.word_reads += 1;
            if (s.tag != 0) {
                packed.push_back(s.rec);
                wc.word_writes += 1;
            }
        }
    }
    bucket_start[nbuckets] = packed.size();

    // Per-bucket RAM sort (step 6's depth-only sub-bucketing is not
    // simulated; it does not change read/write counts).
    std::vector<Record> out;
    out.reserve(n);
    for (Count bkt = 0; bkt < nbuckets; ++bkt) {
        Count lo = bucket_start[bkt], hi = bucket_start[bkt + 1];
        tree_sort_into(packed.data() + lo, hi - lo, out, wc);
    }

    if (stats) {
        stats->sample_size = sample.size();
        stats->buckets = nbuckets;
    }
    assert(out.size() == n);
    return out;
}

} // namespace aem
