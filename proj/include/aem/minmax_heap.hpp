#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

namespace aem {

// Min-max heap (Atkinson et al.): even levels order toward the minimum, odd
// levels toward the maximum.  Gives O(log n) push / pop_min / pop_max with
// O(1) access to both ends, which is what the merge's bounded priority
// structure needs.  Comp is a strict less-than.
template <typename T, typename Comp>
class MinMaxHeap {
public:
    explicit MinMaxHeap(Comp comp = Comp()) : comp_(comp) {}

    std::size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }
    void clear() { a_.clear(); }
    void reserve(std::size_t n) { a_.reserve(n); }

    const T& min() const { return a_[0]; }
    const T& max() const { return a_[max_index()]; }

    void push(const T& v) {
        a_.push_back(v);
        bubble_up(a_.size() - 1);
    }

    T pop_min() {
        T out = a_[0];
        remove_at(0);
        return out;
    }

    T pop_max() {
        std::size_t i = max_index();
        T out = a_[i];
        remove_at(i);
        return out;
    }

private:
    static bool min_level(std::size_t i) {
        return (std::bit_width(i + 1) & 1u) != 0;  // root is level 0 (min)
    }
    bool less(const T& x, const T& y) const { return comp_(x, y); }

    std::size_t max_index() const {
        assert(!a_.empty());
        if (a_.size() == 1) return 0;
        if (a_.size() == 2) return 1;
        return less(a_[1], a_[2]) ? 2 : 1;
    }

    void remove_at(std::size_t i) {
        std::size_t last = a_.size() - 1;
        if (i != last) {
            a_[i] = std::move(a_[last]);
            a_.pop_back();
            trickle_down(i);
        } else {
            a_.pop_back();
        }
    }

    void bubble_up(std::size_t i) {
        if (i == 0) return;
        std::size_t parent = (i - 1) / 2;
        if (min_level(i)) {
            if (less(a_[parent], a_[i])) {
                std::swap(a_[parent], a_[i]);
                bubble_up_dir(parent, false);
            } else {
                bubble_up_dir(i, true);
            }
        } else {
            if (less(a_[i], a_[parent])) {
                std::swap(a_[parent], a_[i]);
                bubble_up_dir(parent, true);
            } else {
                bubble_up_dir(i, false);
            }
        }
    }

    void bubble_up_dir(std::size_t i, bool toward_min) {
        while (i > 2) {
            std::size_t gp = ((i - 1) / 2 - 1) / 2;
            bool swap_needed = toward_min ? less(a_[i], a_[gp]) : less(a_[gp], a_[i]);
            if (!swap_needed) break;
            std::swap(a_[i], a_[gp]);
            i = gp;
        }
    }

    void trickle_down(std::size_t i) {
        if (min_level(i))
            trickle_down_dir(i, true);
        else
            trickle_down_dir(i, false);
    }

    void trickle_down_dir(std::size_t i, bool toward_min) {
        const std::size_t n = a_.size();
        for (;;) {
            // Smallest (largest) among children and grandchildren.
            std::size_t best = i;
            bool best_is_grandchild = false;
            auto consider = [&](std::size_t j, bool grand) {
                if (j >= n) return;
                bool better = toward_min ? less(a_[j], a_[best]) : less(a_[best], a_[j]);
                if (better) {
                    best = j;
                    best_is_grandchild = grand;
                }
            };
            std::size_t c1 = 2 * i + 1, c2 = 2 * i + 2;
            consider(c1, false);
            consider(c2, false);
            for (std::size_t gc = 2 * c1 + 1; gc <= 2 * c2 + 2 && gc < n; ++gc)
                consider(gc, true);
            if (best == i) return;
            std::swap(a_[i], a_[best]);
            if (!best_is_grandchild) return;
            std::size_t parent = (best - 1) / 2;
            bool parent_better = toward_min ? less(a_[parent], a_[best]) : less(a_[best], a_[parent]);
            if (parent_better) std::swap(a_[parent], a_[best]);
            i = best;
        }
    }

    Comp comp_;
    std::vector<T> a_;
};

} // namespace aem
