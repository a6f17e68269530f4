#pragma once

#include "aem/memory_model.hpp"

namespace aem {

// Sequential writer into a pre-sized ExtArray.  Holds one block of arena
// space; flushes exactly when the block fills (or at the end), so a full
// pass writes ceil(n/B) blocks.
class BlockWriter {
public:
    BlockWriter(ExtArray<Record>& out, Arena& arena)
        : out_(&out), buf_(arena.alloc<Record>(out.block_size())) {}

    void push(const Record& r) {
        buf_[fill_++] = r;
        if (fill_ == out_->block_size()) flush();
    }

    void flush() {
        if (fill_ == 0) return;
        out_->write_block(next_block_++, buf_.span().subspan(0, fill_));
        written_ += fill_;
        fill_ = 0;
    }

    Count written() const { return written_ + fill_; }

private:
    ExtArray<Record>* out_;
    ArenaBuffer<Record> buf_;
    Count fill_ = 0;
    Count next_block_ = 0;
    Count written_ = 0;
};

// Appends records to a growing ExtArray, one buffered block at a time.
// Closing out a partial block and appending to it later costs the extra
// read-modify-write that append_block charges.
class BlockAppender {
public:
    BlockAppender(ExtArray<Record>& out, Arena& arena)
        : out_(&out),
          buf_(arena.alloc<Record>(out.block_size())),
          scratch_(arena.alloc<Record>(out.block_size())) {}

    void push(const Record& r) {
        buf_[fill_++] = r;
        if (fill_ == out_->block_size()) flush();
    }

    void flush() {
        if (fill_ == 0) return;
        out_->append_block(buf_.span().subspan(0, fill_), scratch_.span());
        fill_ = 0;
    }

    Count pending() const { return fill_; }

private:
    ExtArray<Record>* out_;
    ArenaBuffer<Record> buf_;
    ArenaBuffer<Record> scratch_;
    Count fill_ = 0;
};

} // namespace aem
