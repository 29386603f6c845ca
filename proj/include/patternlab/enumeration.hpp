#pragma once

#include <algorithm>
#include <functional>
#include <mutex>
#include <vector>

#include "errors.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "set_partition.hpp"

namespace patternlab {

inline constexpr int kDefaultWordEnumCap = 10;
inline constexpr int kDefaultPartitionEnumCap = 12;

// Exact B_n via the Bell triangle; rows are cached process-wide.
inline BigInt bell_number(int n) {
    if (n < 0) throw std::domain_error("bell_number: n must be >= 0");
    static std::vector<BigInt> cache{BigInt(1)};  // B_0
    static std::vector<BigInt> last_row{BigInt(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        std::vector<BigInt> row;
        row.reserve(last_row.size() + 1);
        row.push_back(last_row.back());
        for (std::size_t k = 0; k < last_row.size(); ++k) row.push_back(row[k] + last_row[k]);
        cache.push_back(row.front());
        last_row = std::move(row);
    }
    return cache[static_cast<std::size_t>(n)];
}

// Streams each element of S_M exactly once, lexicographically.
class MultisetPermStream {
  public:
    explicit MultisetPermStream(const Multiset& m, int cap = kDefaultWordEnumCap)
        : word_(m.sorted_word()) {
        if (m.size() > cap)
            throw size_limit_error("multiset permutation enumeration cap exceeded: |M| = " +
                                   std::to_string(m.size()) + " > " + std::to_string(cap));
    }

    bool next(Word& out) {
        if (done_) return false;
        out = word_;
        done_ = !std::next_permutation(word_.begin(), word_.end());
        return true;
    }

  private:
    Word word_;
    bool done_ = false;
};

inline void for_each_multiset_perm(const Multiset& m, const std::function<void(const Word&)>& fn,
                                   int cap = kDefaultWordEnumCap) {
    if (m.size() > cap)
        throw size_limit_error("multiset permutation enumeration cap exceeded: |M| = " +
                               std::to_string(m.size()) + " > " + std::to_string(cap));
    Word w = m.sorted_word();
    do {
        fn(w);
    } while (std::next_permutation(w.begin(), w.end()));
}

// Streams P([n]) exactly once, in lexicographic restricted-growth-string order.
class SetPartitionStream {
  public:
    explicit SetPartitionStream(int n, int cap = kDefaultPartitionEnumCap) : n_(n) {
        if (n < 1) throw std::domain_error("set partition enumeration: n must be >= 1");
        if (n > cap)
            throw size_limit_error("set partition enumeration cap exceeded: n = " +
                                   std::to_string(n) + " > " + std::to_string(cap));
        rgs_.assign(static_cast<std::size_t>(n), 0);
    }

    bool next(SetPartition& out) {
        if (done_) return false;
        out = SetPartition::from_rgs(rgs_);
        done_ = !advance();
        return true;
    }

    bool next_rgs(std::vector<int>& out) {
        if (done_) return false;
        out = rgs_;
        done_ = !advance();
        return true;
    }

  private:
    bool advance() {
        // next RGS in lex order: a_1 = 0, a_{i+1} <= 1 + max(a_1..a_i)
        for (int i = n_ - 1; i >= 1; --i) {
            int maxprev = 0;
            for (int t = 0; t < i; ++t) maxprev = std::max(maxprev, rgs_[static_cast<std::size_t>(t)]);
            if (rgs_[static_cast<std::size_t>(i)] <= maxprev) {
                ++rgs_[static_cast<std::size_t>(i)];
                std::fill(rgs_.begin() + i + 1, rgs_.end(), 0);
                return true;
            }
        }
        return false;
    }

    int n_;
    std::vector<int> rgs_;
    bool done_ = false;
};

inline void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& fn,
                                   int cap = kDefaultPartitionEnumCap) {
    SetPartitionStream stream(n, cap);
    SetPartition p;
    while (stream.next(p)) fn(p);
}

// All set partitions of [r] as block lists, small r only (cumulant sums).
inline std::vector<std::vector<std::vector<int>>> partitions_of_index_set(int r) {
    std::vector<std::vector<std::vector<int>>> out;
    if (r == 0) {
        out.push_back({});
        return out;
    }
    SetPartitionStream stream(r, r);
    SetPartition p;
    while (stream.next(p)) out.push_back(p.blocks());
    return out;
}

// Mobius function mu(pi, 1) of the partition lattice: (-1)^{#pi-1} (#pi-1)!.
// The lattice-recursion cross-check lives in the test suite.
inline BigInt mobius_partition_lattice(const SetPartition& pi) {
    int b = pi.block_count();
    BigInt f = factorial(static_cast<unsigned>(b - 1));
    return (b % 2 == 1) ? f : -f;
}

inline BigInt mobius_from_block_count(int blocks) {
    BigInt f = factorial(static_cast<unsigned>(blocks - 1));
    return (blocks % 2 == 1) ? f : -f;
}

}  // namespace patternlab
