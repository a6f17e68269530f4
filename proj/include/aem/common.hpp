#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aem {

using Count = std::uint64_t;

// One data object in the simulated memories.  (key, tiebreak) is unique
// across an input instance; the payload is opaque ballast.
struct Record {
    std::int64_t key = 0;
    std::uint64_t tiebreak = 0;
    std::uint64_t payload = 0;

    friend bool operator==(const Record& a, const Record& b) {
        return a.key == b.key && a.tiebreak == b.tiebreak;
    }
};

inline bool record_less(const Record& a, const Record& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.tiebreak < b.tiebreak;
}

struct RecordLess {
    bool operator()(const Record& a, const Record& b) const { return record_less(a, b); }
};

inline Count ceil_div(Count a, Count b) { return (a + b - 1) / b; }

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

class BoundViolation : public std::runtime_error {
public:
    explicit BoundViolation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aem
