#pragma once

#include "aem/common.hpp"
#include "aem/memory_model.hpp"

#include <cassert>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

namespace aem {

enum class CacheEvent { read_hit, write_hit, load_read, load_write, evict_clean, evict_dirty };

struct TraceEntry {
    CacheEvent event;
    Count block;
};

inline std::string trace_line(const TraceEntry& e) {
    const char* tag = nullptr;
    switch (e.event) {
        case CacheEvent::read_hit: tag = "R_HIT"; break;
        case CacheEvent::write_hit: tag = "W_HIT"; break;
        case CacheEvent::load_read: tag = "R"; break;
        case CacheEvent::load_write: tag = "W"; break;
        case CacheEvent::evict_clean: tag = "EVICT_CLEAN"; break;
        case CacheEvent::evict_dirty: tag = "EVICT_DIRTY"; break;
    }
    return std::string(tag) + " " + std::to_string(e.block);
}

// Two equal pools of M_L/B block slots with LRU replacement in each.
// Reads: hit in the read pool is free; hit in the write pool copies the
// block identity into the read pool (the dirty copy stays, keeping its
// write-back obligation); a miss loads into the read pool for one block
// read.  Writes are symmetric with write-allocate (the miss load costs one
// read) and a dirty eviction costs one block write.  Clean evictions are
// free.  Storage itself lives in the TracedArrays; the cache tracks only
// identity, recency and dirtiness, so both pools can reference one block
// without copies going stale.
class AsymCache {
public:
    AsymCache(Count pool_blocks, Count block_records)
        : pool_blocks_(pool_blocks), block_records_(block_records) {
        if (pool_blocks_ < 1) throw ConfigError("cache pools need at least one block");
    }

    static AsymCache from_config(const MemoryConfig& cfg) {
        return AsymCache(cfg.mem_records / cfg.block_records, cfg.block_records);
    }

    Count block_records() const { return block_records_; }
    Count pool_capacity() const { return pool_blocks_; }
    const IoCounters& io() const { return io_; }
    Count read_pool_size() const { return read_lru_.size(); }
    Count write_pool_size() const { return write_lru_.size(); }

    void enable_trace(bool on) { tracing_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }

    Count new_array_id() { return next_array_id_++; }

    void touch_read(Count block) {
        auto it = lines_.find(block);
        if (it != lines_.end() && it->second.in_read) {
            read_lru_.splice(read_lru_.begin(), read_lru_, it->second.read_pos);
            log(CacheEvent::read_hit, block);
            return;
        }
        if (it != lines_.end() && it->second.in_write) {
            // Copy into the read pool; the dirty copy is retained.
            insert_read(block);
            write_lru_.splice(write_lru_.begin(), write_lru_, it->second.write_pos);
            log(CacheEvent::read_hit, block);
            check_invariants();
            return;
        }
        ++io_.block_reads;
        log(CacheEvent::load_read, block);
        insert_read(block);
        check_invariants();
    }

    void touch_write(Count block) {
        auto it = lines_.find(block);
        if (it != lines_.end() && it->second.in_write) {
            write_lru_.splice(write_lru_.begin(), write_lru_, it->second.write_pos);
            log(CacheEvent::write_hit, block);
            return;
        }
        if (it != lines_.end() && it->second.in_read) {
            insert_write(block);
            read_lru_.splice(read_lru_.begin(), read_lru_, it->second.read_pos);
            log(CacheEvent::write_hit, block);
            check_invariants();
            return;
        }
        // Write-allocate: load the block, then keep it dirty.
        ++io_.block_reads;
        log(CacheEvent::load_write, block);
        insert_write(block);
        check_invariants();
    }

    // Write back every dirty block and empty both pools.
    void flush_all() {
        for (Count b : write_lru_) {
            ++io_.block_writes;
            log(CacheEvent::evict_dirty, b);
        }
        for (Count b : read_lru_) log(CacheEvent::evict_clean, b);
        write_lru_.clear();
        read_lru_.clear();
        lines_.clear();
    }

private:
    struct Line {
        bool in_read = false;
        bool in_write = false;
        std::list<Count>::iterator read_pos;
        std::list<Count>::iterator write_pos;
    };

    void insert_read(Count block) {
        if (read_lru_.size() == pool_blocks_) {
            Count victim = read_lru_.back();
            read_lru_.pop_back();
            drop(victim, /*from_read=*/true);
            log(CacheEvent::evict_clean, victim);
        }
        read_lru_.push_front(block);
        Line& ln = lines_[block];
        ln.in_read = true;
        ln.read_pos = read_lru_.begin();
    }

    void insert_write(Count block) {
        if (write_lru_.size() == pool_blocks_) {
            Count victim = write_lru_.back();
            write_lru_.pop_back();
            ++io_.block_writes;
            drop(victim, /*from_read=*/false);
            log(CacheEvent::evict_dirty, victim);
        }
        write_lru_.push_front(block);
        Line& ln = lines_[block];
        ln.in_write = true;
        ln.write_pos = write_lru_.begin();
    }

    void drop(Count block, bool from_read) {
        auto it = lines_.find(block);
        assert(it != lines_.end());
        if (from_read)
            it->second.in_read = false;
        else
            it->second.in_write = false;
        if (!it->second.in_read && !it->second.in_write) lines_.erase(it);
    }

    void log(CacheEvent ev, Count block) {
        if (tracing_) trace_.push_back({ev, block});
    }

    void check_invariants() const {
        assert(read_lru_.size() <= pool_blocks_);
        assert(write_lru_.size() <= pool_blocks_);
    }

    Count pool_blocks_;
    Count block_records_;
    IoCounters io_;
    std::list<Count> read_lru_;
    std::list<Count> write_lru_;
    std::unordered_map<Count, Line> lines_;
    Count next_array_id_ = 0;
    bool tracing_ = false;
    std::vector<TraceEntry> trace_;
};

// Addressable array whose every access is mediated by the cache.  Used by
// the cache-oblivious algorithms; they see omega but never M or B.
template <typename T = Record>
class TracedArray {
public:
    TracedArray(AsymCache& cache, Count length)
        : cache_(&cache), length_(length), store_(length),
          base_block_((cache.new_array_id()) << 40) {}

    Count length() const { return length_; }
    AsymCache& cache() const { return *cache_; }

    T get(Count i) const {
        if (i >= length_) throw std::out_of_range("traced get");
        cache_->touch_read(block_of(i));
        return store_[i];
    }

    void set(Count i, const T& v) {
        if (i >= length_) throw std::out_of_range("traced set");
        cache_->touch_write(block_of(i));
        store_[i] = v;
    }

    // Unmetered access for oracles and input setup.
    const std::vector<T>& peek_all() const { return store_; }
    void fill_unmetered(const std::vector<T>& src) {
        length_ = src.size();
        store_ = src;
    }

private:
    Count block_of(Count i) const { return base_block_ + i / cache_->block_records(); }

    AsymCache* cache_;
    Count length_;
    std::vector<T> store_;
    Count base_block_;
};

} // namespace aem
