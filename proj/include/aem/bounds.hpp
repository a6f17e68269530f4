#pragma once

#include "aem/common.hpp"
#include "aem/memory_model.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace aem::bounds {

// ceil(log_{lambda*M/B}(n/B)) computed in exact integer arithmetic:
// the smallest L with (lambda*M/B)^L * B >= n.  Requires fanout >= 2.
inline Count merge_levels(Count n, Count m, Count b, Count lambda) {
    Count base = lambda * m / b;
    if (base < 2) throw ConfigError("merge fanout must be >= 2");
    Count levels = 0;
    Count reach = b;  // base^levels * B
    while (reach < n) {
        ++levels;
        if (reach > std::numeric_limits<Count>::max() / base) break;
        reach *= base;
    }
    return levels;
}

struct ReadWriteBound {
    Count reads = 0;
    Count writes = 0;
    Count cost(Count omega) const { return reads + omega * writes; }
};

// Whole-sort bounds: R <= (lambda+1)*ceil(n/B)*levels, W <= ceil(n/B)*levels.
inline ReadWriteBound mergesort_bound(Count n, Count m, Count b, Count lambda) {
    Count nb = ceil_div(n, b);
    Count lv = merge_levels(n, m, b, lambda);
    return {(lambda + 1) * nb * lv, nb * lv};
}

// One l-way merge of block-aligned runs totalling n records.
inline ReadWriteBound merge_bound(Count n, Count b, Count lambda) {
    Count nb = ceil_div(n, b);
    return {(lambda + 1) * nb, nb};
}

// Selection-sort base case, n <= lambda*M.
inline ReadWriteBound selection_sort_bound(Count n, Count b, Count lambda) {
    Count nb = ceil_div(n, b);
    return {lambda * nb, nb};
}

// Blocked matrix multiply, exact counts for n divisible by sqrt(M).
inline ReadWriteBound blocked_matmul_bound(Count n, Count m, Count b) {
    Count root = static_cast<Count>(std::llround(std::sqrt(static_cast<double>(m))));
    if (root * root != m) throw ConfigError("blocked matmul needs square M");
    return {2 * n * n * n / (b * root), n * n / b};
}

// Priority-queue amortized shapes (per-operation denominators used when
// fitting constants): reads ~ (lambda/B)(1+log_{lambda*M/B} n) and
// writes ~ (1/B)(1+log_{lambda*M/B} n).
inline double pq_log_term(Count n, Count m, Count b, Count lambda) {
    double base = static_cast<double>(lambda * m) / static_cast<double>(b);
    return 1.0 + std::log(static_cast<double>(n)) / std::log(base);
}
inline double pq_read_shape(Count n, Count m, Count b, Count lambda) {
    return static_cast<double>(lambda) / static_cast<double>(b) * pq_log_term(n, m, b, lambda);
}
inline double pq_write_shape(Count n, Count m, Count b, Count lambda) {
    return 1.0 / static_cast<double>(b) * pq_log_term(n, m, b, lambda);
}

// The branching-factor inequality: lambda/log2(lambda) < omega/log2(M/B).
// lambda = 1 trivially recovers the classic algorithm and is always allowed.
inline bool branch_factor_admissible(Count lambda, Count omega, Count m, Count b) {
    if (lambda <= 1) return true;
    double lhs = static_cast<double>(lambda) / std::log2(static_cast<double>(lambda));
    double rhs = static_cast<double>(omega) / std::log2(static_cast<double>(m) / b);
    return lhs < rhs;
}

struct LambdaChoice {
    Count lambda = 1;
    Count total_cost = 0;  // (omega + lambda + 1) * ceil(n/B) * levels
    struct Candidate {
        Count lambda;
        Count levels;
        Count total_cost;
        bool admissible;  // the lambda/log2(lambda) inequality
    };
    std::vector<Candidate> candidates;
};

// Try lambda = ceil((n/B)^(1/p') / (M/B)) for p' = 1..p where p is the
// classic level count, clamp to [1, omega], and keep whichever minimizes the
// combined cost.  lambda = 1 is always a candidate, so the choice never
// loses to the classic mergesort.
inline LambdaChoice choose_lambda(Count omega, Count m, Count b, Count n) {
    if (n == 0) n = 1;
    Count p = merge_levels(n, m, b, 1);
    if (p == 0) p = 1;

    auto eval = [&](Count lambda) {
        Count lv = merge_levels(n, m, b, lambda);
        Count total = (omega + lambda + 1) * ceil_div(n, b) * lv;
        return LambdaChoice::Candidate{lambda, lv,
                                       total, branch_factor_admissible(lambda, omega, m, b)};
    };

    LambdaChoice out;
    std::vector<Count> seen;
    double nb = static_cast<double>(n) / static_cast<double>(b);
    double mb = static_cast<double>(m) / static_cast<double>(b);
    for (Count pp = 1; pp <= p + 1; ++pp) {
        double raw = std::pow(nb, 1.0 / static_cast<double>(pp)) / mb;
        Count lambda = raw <= 1.0 ? 1 : static_cast<Count>(std::ceil(raw));
        if (lambda > omega) lambda = omega;
        if (lambda < 1) lambda = 1;
        bool dup = false;
        for (Count s : seen) dup |= (s == lambda);
        if (!dup) seen.push_back(lambda);
    }
    bool have_one = false;
    for (Count s : seen) have_one |= (s == 1);
    if (!have_one) seen.push_back(1);

    for (Count lambda : seen) out.candidates.push_back(eval(lambda));
    out.lambda = 0;
    for (const auto& c : out.candidates) {
        if (out.lambda == 0 || c.total_cost < out.total_cost ||
            (c.total_cost == out.total_cost && c.lambda < out.lambda)) {
            out.lambda = c.lambda;
            out.total_cost = c.total_cost;
        }
    }
    return out;
}

} // namespace aem::bounds
