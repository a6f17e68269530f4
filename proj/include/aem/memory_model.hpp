#pragma once

#include "aem/common.hpp"

#include <cassert>
#include <cstring>
#include <memory>
#include <span>
#include <vector>

namespace aem {

// Model parameters.  M and B are in records, omega is the write/read cost
// ratio, lambda the branching multiplier (l = lambda*M/B).  aux_slack is the
// extra primary-memory allowance for cursors and transfer buffers; the
// default matches the merge's requirement of M + 2B + 2*ceil(lambda*M/B)
// records, with one cursor occupying one record slot.
struct MemoryConfig {
    Count mem_records = 0;    // M
    Count block_records = 0;  // B
    Count omega = 1;
    Count lambda = 1;
    Count aux_slack = 0;
    bool tall_cache = false;

    static Count default_aux_slack(Count m, Count b, Count lambda) {
        if (b == 0) return 0;  // validate() rejects the config anyway
        return 2 * b + 2 * ceil_div(lambda * m, b);
    }

    static MemoryConfig make(Count m, Count b, Count omega, Count lambda,
                             bool tall_cache = false) {
        MemoryConfig cfg;
        cfg.mem_records = m;
        cfg.block_records = b;
        cfg.omega = omega;
        cfg.lambda = lambda;
        cfg.aux_slack = default_aux_slack(m, b, lambda);
        cfg.tall_cache = tall_cache;
        cfg.validate();
        return cfg;
    }

    void validate() const {
        if (block_records < 1) throw ConfigError("B must be >= 1");
        if (mem_records < block_records) throw ConfigError("M must be >= B");
        if (mem_records % block_records != 0) throw ConfigError("M must be a multiple of B");
        if (omega < 1) throw ConfigError("omega must be >= 1");
        if (lambda < 1) throw ConfigError("lambda must be >= 1");
        if (lambda > omega) throw ConfigError("lambda must be <= omega");
        if (tall_cache && mem_records < block_records * block_records)
            throw ConfigError("tall cache requires M >= B^2");
        if (aux_slack < default_aux_slack(mem_records, block_records, lambda))
            throw ConfigError("aux_slack below 2B + 2*ceil(lambda*M/B)");
    }

    Count fanout() const { return lambda * mem_records / block_records; }
};

struct IoCounters {
    Count block_reads = 0;
    Count block_writes = 0;

    // Always recomputed, never stored.
    Count cost(Count omega) const { return block_reads + omega * block_writes; }
};

enum class ArenaMode { strict, audit };

class Arena;

// RAII slice of primary memory.  Slot accounting is in record-sized units:
// one Record, one cursor, one scalar each take one slot.
template <typename T>
class ArenaBuffer {
public:
    ArenaBuffer() = default;
    ArenaBuffer(Arena* arena, Count slots) : arena_(arena), slots_(slots), data_(slots) {}
    ArenaBuffer(ArenaBuffer&& o) noexcept
        : arena_(o.arena_), slots_(o.slots_), data_(std::move(o.data_)) {
        o.arena_ = nullptr;
        o.slots_ = 0;
    }
    ArenaBuffer& operator=(ArenaBuffer&& o) noexcept {
        release();
        arena_ = o.arena_;
        slots_ = o.slots_;
        data_ = std::move(o.data_);
        o.arena_ = nullptr;
        o.slots_ = 0;
        return *this;
    }
    ArenaBuffer(const ArenaBuffer&) = delete;
    ArenaBuffer& operator=(const ArenaBuffer&) = delete;
    ~ArenaBuffer() { release(); }

    std::span<T> span() { return {data_.data(), data_.size()}; }
    std::span<const T> span() const { return {data_.data(), data_.size()}; }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T& operator[](Count i) { return data_[i]; }
    const T& operator[](Count i) const { return data_[i]; }
    Count size() const { return data_.size(); }

    void release();

private:
    Arena* arena_ = nullptr;
    Count slots_ = 0;
    std::vector<T> data_;
};

// Primary-memory budget.  Algorithms must draw all working space from here;
// in strict mode exceeding the capacity is an error (the algorithm broke its
// claimed memory bound), in audit mode it is recorded and the run continues.
class Arena {
public:
    Arena(Count capacity, ArenaMode mode) : capacity_(capacity), mode_(mode) {}

    template <typename T = Record>
    ArenaBuffer<T> alloc(Count slots) {
        charge(slots);
        return ArenaBuffer<T>(this, slots);
    }

    void charge(Count slots) {
        in_use_ += slots;
        if (in_use_ > peak_) peak_ = in_use_;
        if (in_use_ > capacity_) {
            ++overflows_;
            if (mode_ == ArenaMode::strict)
                throw BudgetExceeded("arena over budget: " + std::to_string(in_use_) +
                                     " of " + std::to_string(capacity_) + " records");
        }
    }

    void uncharge(Count slots) {
        assert(slots <= in_use_);
        in_use_ -= slots;
    }

    Count capacity() const { return capacity_; }
    Count in_use() const { return in_use_; }
    Count peak_use() const { return peak_; }
    Count overflow_events() const { return overflows_; }
    ArenaMode mode() const { return mode_; }

private:
    Count capacity_;
    ArenaMode mode_;
    Count in_use_ = 0;
    Count peak_ = 0;
    Count overflows_ = 0;
};

template <typename T>
void ArenaBuffer<T>::release() {
    if (arena_) {
        arena_->uncharge(slots_);
        arena_ = nullptr;
        slots_ = 0;
    }
    data_.clear();
}

// One simulation run: configuration, transfer counters, primary-memory
// arena, and a comparison tally (comparisons are free in the model; the
// tally is diagnostic only).
class Sim {
public:
    explicit Sim(MemoryConfig cfg, ArenaMode mode = ArenaMode::strict)
        : Sim(cfg, mode, cfg.mem_records + cfg.aux_slack) {}

    Sim(MemoryConfig cfg, ArenaMode mode, Count arena_capacity)
        : cfg_(cfg), arena_(arena_capacity, mode) {
        cfg_.validate();
    }

    const MemoryConfig& config() const { return cfg_; }
    IoCounters& io() { return io_; }
    const IoCounters& io() const { return io_; }
    Arena& arena() { return arena_; }
    const Arena& arena() const { return arena_; }
    Count cost() const { return io_.cost(cfg_.omega); }

    Count comparisons = 0;

private:
    MemoryConfig cfg_;
    IoCounters io_;
    Arena arena_;
};

// Block-aligned array in simulated secondary memory.  Contents move only
// through whole-block transfers charged to the owning run's counters; the
// unmetered accessors are for test oracles and input generation, never for
// algorithm work.
template <typename T = Record>
class ExtArray {
public:
    ExtArray(Sim& sim, Count length) : sim_(&sim), length_(length), store_(length) {}

    Count length() const { return length_; }
    Count block_size() const { return sim_->config().block_records; }
    Count block_count() const { return ceil_div(length_, block_size()); }
    Sim& sim() const { return *sim_; }

    // Records in block b: [b*B, min((b+1)*B, length)).
    Count records_in_block(Count block) const {
        Count b = block_size();
        Count start = block * b;
        return std::min(b, length_ - start);
    }

    void read_block(Count block, std::span<T> dest) const {
        if (block >= block_count()) throw std::out_of_range("read_block: block index");
        Count k = records_in_block(block);
        if (dest.size() < k) throw std::out_of_range("read_block: dest too small");
        std::memcpy(dest.data(), store_.data() + block * block_size(), k * sizeof(T));
        ++sim_->io().block_reads;
    }

    void write_block(Count block, std::span<const T> src) {
        if (block >= block_count()) throw std::out_of_range("write_block: block index");
        Count k = records_in_block(block);
        if (src.size() < k) throw std::out_of_range("write_block: src too small");
        std::memcpy(store_.data() + block * block_size(), src.data(), k * sizeof(T));
        ++sim_->io().block_writes;
    }

    // Appends k <= B records as one block transfer.  If the array ends on a
    // partial block the tail is first re-read so the transfer stays
    // block-aligned; most writers avoid that by appending full blocks.
    void append_block(std::span<const T> src, std::span<T> scratch) {
        Count b = block_size();
        Count k = src.size();
        if (k == 0) return;
        if (k > b) throw std::out_of_range("append_block: more than one block");
        Count tail = length_ % b;
        if (tail != 0) {
            Count last = block_count() - 1;
            read_block(last, scratch);
            Count take = std::min(k, b - tail);
            std::memcpy(scratch.data() + tail, src.data(), take * sizeof(T));
            grow(take);
            write_block(last, scratch.subspan(0, tail + take));
            if (take < k) append_block(src.subspan(take), scratch);
            return;
        }
        grow(k);
        write_block(block_count() - 1, src);
    }

    // Unmetered access for oracles, generators and invariant checks.
    std::vector<T> peek_all() const { return store_; }
    const T& peek(Count i) const { return store_[i]; }
    void fill_unmetered(std::span<const T> src) {
        length_ = src.size();
        store_.assign(src.begin(), src.end());
    }

private:
    void grow(Count k) {
        length_ += k;
        if (store_.size() < length_) store_.resize(length_);
    }

    Sim* sim_;
    Count length_;
    std::vector<T> store_;
};

// Read-only, block-aligned view of a contiguous block range.
template <typename T = Record>
struct ExtSlice {
    const ExtArray<T>* arr = nullptr;
    Count first_block = 0;
    Count length = 0;

    ExtSlice() = default;
    ExtSlice(const ExtArray<T>& a) : arr(&a), first_block(0), length(a.length()) {}
    ExtSlice(const ExtArray<T>& a, Count first, Count len)
        : arr(&a), first_block(first), length(len) {}

    Count block_count() const { return ceil_div(length, arr->block_size()); }
    Count records_in_block(Count block) const {
        Count b = arr->block_size();
        return std::min(b, length - block * b);
    }
    void read_block(Count block, std::span<T> dest) const {
        if (block >= block_count()) throw std::out_of_range("slice read_block");
        arr->read_block(first_block + block, dest);
    }
};

} // namespace aem
