#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "multiset.hpp"
#include "rational.hpp"
#include "set_partition.hpp"

namespace patternlab {

namespace detail {

// Subsequences of sigma equal to the concrete letter string c_1..c_l.
// One left-to-right scan; f[t] counts matches of the length-t prefix.
template <class Count>
Count count_fixed_subsequences(const Word& sigma, const std::vector<int>& c) {
    const int l = static_cast<int>(c.size());
    std::vector<Count> f(static_cast<std::size_t>(l) + 1, Count(0));
    f[0] = Count(1);
    for (int x : sigma)
        for (int t = l; t >= 1; --t)
            if (x == c[static_cast<std::size_t>(t - 1)]) f[static_cast<std::size_t>(t)] += f[static_cast<std::size_t>(t - 1)];
    return f[static_cast<std::size_t>(l)];
}

// Occ^tau(sigma) = sum over j_1<...<j_l of #subsequences with letters
// j_{tau(1)},...,j_{tau(l)}; this is the indicator-product decomposition of
// the count, summed one value tuple at a time.
template <class Count>
Count count_perm_pattern_by_letters(const Word& sigma, const PermPattern& tau) {
    const int l = tau.size();
    std::vector<int> letters(sigma.begin(), sigma.end());
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    const int k = static_cast<int>(letters.size());
    if (l > k) return Count(0);

    Count total(0);
    std::vector<int> pick(static_cast<std::size_t>(l));  // indices into letters
    std::vector<int> c(static_cast<std::size_t>(l));
    for (int t = 0; t < l; ++t) pick[static_cast<std::size_t>(t)] = t;
    while (true) {
        for (int t = 1; t <= l; ++t)
            c[static_cast<std::size_t>(t - 1)] =
                letters[static_cast<std::size_t>(pick[static_cast<std::size_t>(tau.at(t) - 1)])];
        total += count_fixed_subsequences<Count>(sigma, c);
        // next combination
        int t = l - 1;
        while (t >= 0 && pick[static_cast<std::size_t>(t)] == k - l + t) --t;
        if (t < 0) break;
        ++pick[static_cast<std::size_t>(t)];
        for (int s = t + 1; s < l; ++s)
            pick[static_cast<std::size_t>(s)] = pick[static_cast<std::size_t>(s - 1)] + 1;
    }
    return total;
}

// Position-subset backtracking with pruning on partial order violations.
// visit(chosen) is called for every occurrence; chosen holds 1-based positions.
template <class Visit>
void scan_perm_occurrences(const Word& sigma, const PermPattern& tau, Visit&& visit) {
    const int n = static_cast<int>(sigma.size());
    const int l = tau.size();
    if (l > n) return;
    std::vector<int> chosen(static_cast<std::size_t>(l));
    // order constraint between already-chosen slots and the new one
    auto consistent = [&](int depth, int pos) {
        int xv = sigma[static_cast<std::size_t>(pos - 1)];
        for (int t = 0; t < depth; ++t) {
            int yv = sigma[static_cast<std::size_t>(chosen[static_cast<std::size_t>(t)] - 1)];
            if (xv == yv) return false;  // occurrences need distinct entries
            if ((tau.at(depth + 1) < tau.at(t + 1)) != (xv < yv)) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == l) {
            visit(chosen);
            return;
        }
        for (int pos = start; pos <= n - (l - depth - 1); ++pos) {
            if (!consistent(depth, pos)) continue;
            chosen[static_cast<std::size_t>(depth)] = pos;
            self(self, depth + 1, pos + 1);
        }
    };
    rec(rec, 0, 1);
}

}  // namespace detail

// Number of occurrences of tau in sigma. Count must hold values up to
// C(n, l); use BigInt when in doubt. Two exact routes: a letter-tuple scan
// (cheap for small alphabets, the usual case here) and position backtracking
// (cheap for short words); the cost estimate picks one.
template <class Count = BigInt>
Count count_perm_pattern_as(const Word& sigma, const PermPattern& tau) {
    const int n = static_cast<int>(sigma.size());
    const int l = tau.size();
    if (l > n) return Count(0);
    std::vector<int> letters(sigma.begin(), sigma.end());
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    const double k = static_cast<double>(letters.size());
    double combos = 1.0;
    for (int t = 0; t < l; ++t) combos *= (k - t) / (t + 1);
    double letter_cost = combos * n * l;
    double subset_cost = 1.0;
    for (int t = 0; t < l; ++t) subset_cost *= (static_cast<double>(n) - t) / (t + 1);
    if (letter_cost <= subset_cost * l)
        return detail::count_perm_pattern_by_letters<Count>(sigma, tau);
    Count total(0);
    detail::scan_perm_occurrences(sigma, tau, [&](const std::vector<int>&) { total += Count(1); });
    return total;
}

inline BigInt count_perm_pattern(const Word& sigma, const PermPattern& tau) {
    return count_perm_pattern_as<BigInt>(sigma, tau);
}

// Sorted position tuples of all occurrences.
inline std::vector<std::vector<int>> occurrences_perm_pattern(const Word& sigma,
                                                              const PermPattern& tau) {
    std::vector<std::vector<int>> out;
    detail::scan_perm_occurrences(sigma, tau, [&](const std::vector<int>& pos) { out.push_back(pos); });
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

// Fast arc-pattern count: choose a partition arc for every pattern arc
// (consistent and order-respecting), then place the unconstrained pattern
// positions into the gaps; each maximal run of free slots between embedded
// values a < b contributes C(b-a-1, run).
template <class Count>
Count count_arc_pattern_impl(int n, const std::vector<Arc>& part_arcs, const ArcPattern& pat) {
    const int l = pat.length();
    if (l > n) return Count(0);
    const auto& parcs = pat.arcs();
    const int a = static_cast<int>(parcs.size());

    auto choose = [&](long long x, int r) -> Count {
        if (r < 0 || x < r) return Count(0);
        Count res(1);
        for (int t = 0; t < r; ++t) {
            res *= Count(static_cast<long>(x - t));
            res /= Count(t + 1);
        }
        return res;
    };

    std::vector<int> val(static_cast<std::size_t>(l) + 1, 0);  // slot -> value, 0 = free
    Count total(0);

    auto free_runs_product = [&]() -> Count {
        Count prod(1);
        int prev_val = 0;  // value before slot 1
        int run = 0;
        for (int s = 1; s <= l; ++s) {
            if (val[static_cast<std::size_t>(s)] == 0) {
                ++run;
            } else {
                if (run > 0) {
                    prod *= choose(val[static_cast<std::size_t>(s)] - prev_val - 1, run);
                    if (prod == 0) return prod;
                    run = 0;
                }
                prev_val = val[static_cast<std::size_t>(s)];
            }
        }
        if (run > 0) prod *= choose(n - prev_val, run);
        return prod;
    };

    auto rec = [&](auto&& self, int arc_idx) -> void {
        if (arc_idx == a) {
            total += free_runs_product();
            return;
        }
        auto [p, q] = parcs[static_cast<std::size_t>(arc_idx)];
        for (const auto& [x, y] : part_arcs) {
            int oldp = val[static_cast<std::size_t>(p)];
            int oldq = val[static_cast<std::size_t>(q)];
            if (oldp != 0 && oldp != x) continue;
            if (oldq != 0 && oldq != y) continue;
            val[static_cast<std::size_t>(p)] = x;
            val[static_cast<std::size_t>(q)] = y;
            // strict monotonicity across all assigned slots
            bool ok = true;
            int last = 0;
            for (int s = 1; s <= l && ok; ++s) {
                int v = val[static_cast<std::size_t>(s)];
                if (v == 0) continue;
                if (v <= last)
                    ok = false;
                else
                    last = v;
            }
            if (ok) self(self, arc_idx + 1);
            val[static_cast<std::size_t>(p)] = oldp;
            val[static_cast<std::size_t>(q)] = oldq;
        }
    };
    rec(rec, 0);
    return total;
}

}  // namespace detail

template <class Count = BigInt>
Count count_arc_pattern_as(const SetPartition& pi, const ArcPattern& pat) {
    return detail::count_arc_pattern_impl<Count>(pi.n(), pi.arcs(), pat);
}

inline BigInt count_arc_pattern(const SetPartition& pi, const ArcPattern& pat) {
    return count_arc_pattern_as<BigInt>(pi, pat);
}

// Occurrence positions by direct backtracking over x_1 < ... < x_l.
inline std::vector<std::vector<int>> occurrences_arc_pattern(const SetPartition& pi,
                                                             const ArcPattern& pat) {
    const int n = pi.n();
    const int l = pat.length();
    std::vector<std::vector<int>> out;
    if (l > n) return out;
    std::set<Arc> arcset;
    for (const auto& arc : pi.arcs()) arcset.insert(arc);
    std::vector<int> x(static_cast<std::size_t>(l) + 1, 0);
    auto rec = [&](auto&& self, int slot) -> void {
        if (slot > l) {
            out.emplace_back(x.begin() + 1, x.end());
            return;
        }
        for (int v = x[static_cast<std::size_t>(slot - 1)] + 1; v <= n - (l - slot); ++v) {
            x[static_cast<std::size_t>(slot)] = v;
            bool ok = true;
            for (const auto& [i, j] : pat.arcs())
                if (j == slot && !arcset.count({x[static_cast<std::size_t>(i)], v})) {
                    ok = false;
                    break;
                }
            if (ok) self(self, slot + 1);
        }
        x[static_cast<std::size_t>(slot)] = 0;
    };
    rec(rec, 1);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace patternlab
