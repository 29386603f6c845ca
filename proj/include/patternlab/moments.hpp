#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "enumeration.hpp"
#include "errors.hpp"
#include "indicators.hpp"
#include "multiset.hpp"
#include "murn.hpp"
#include "rational.hpp"
#include "set_partition.hpp"

namespace patternlab {

inline constexpr int kDefaultCumulantOrderCap = 6;

namespace detail {

// Partitions of {0..r-1} with their Mobius signs, cached per r.
struct IndexPartition {
    std::vector<std::vector<int>> blocks;
    BigInt mobius;
};

inline const std::vector<IndexPartition>& cached_index_partitions(int r) {
    // deque keeps earlier rows' addresses stable while the cache grows
    static std::deque<std::vector<IndexPartition>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= r) {
        int rr = static_cast<int>(cache.size());
        std::vector<IndexPartition> ps;
        if (rr >= 1) {
            for (auto& blocks : partitions_of_index_set(rr)) {
                IndexPartition ip;
                ip.mobius = mobius_from_block_count(static_cast<int>(blocks.size()));
                for (auto& b : blocks) {
                    std::vector<int> zb;
                    zb.reserve(b.size());
                    for (int x : b) zb.push_back(x - 1);
                    ip.blocks.push_back(std::move(zb));
                }
                ps.push_back(std::move(ip));
            }
        }
        cache.push_back(std::move(ps));
    }
    return cache[static_cast<std::size_t>(r)];
}

}  // namespace detail

// kappa(B) = sum over partitions pi of [r] of mu(pi,1) prod_blocks E[prod block].
// The oracle receives sub-multisets of the bag (sorted); repeated indicators
// collapse inside the oracle (X^2 = X), not here.
template <class Ind, class Oracle>
Rational joint_cumulant(Oracle&& oracle, std::vector<Ind> bag,
                        int order_cap = kDefaultCumulantOrderCap) {
    const int r = static_cast<int>(bag.size());
    if (r == 0) throw std::domain_error("joint_cumulant: empty bag");
    if (r > order_cap)
        throw size_limit_error("joint_cumulant: order " + std::to_string(r) + " exceeds cap " +
                               std::to_string(order_cap));
    std::sort(bag.begin(), bag.end());
    Rational acc(0);
    std::vector<Ind> sub;
    for (const auto& ip : detail::cached_index_partitions(r)) {
        Rational term(ip.mobius);
        for (const auto& block : ip.blocks) {
            sub.clear();
            for (int t : block) sub.push_back(bag[static_cast<std::size_t>(t)]);
            term *= oracle(sub);
            if (term == 0) break;
        }
        acc += term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Multiset permutation moments
// ---------------------------------------------------------------------------

// E[prod_{X_i^j in C} X_i^j] for distinct positions: a ratio of multinomials.
// Zero whenever some a_j is overdrawn.
inline Rational joint_moment_mperm_closed(const Multiset& m, const MPermBag& c) {
    std::set<int> positions;
    int max_value = m.distinct();
    for (const auto& x : c) {
        if (x.pos < 1 || x.pos > m.size())
            throw std::domain_error("indicator position out of range");
        if (!positions.insert(x.pos).second)
            throw std::domain_error("joint_moment_mperm_closed: duplicate positions");
        max_value = std::max(max_value, x.value);
    }
    if (c.empty()) return Rational(1);
    std::vector<long> parts(static_cast<std::size_t>(max_value), 0);
    for (int j = 1; j <= m.distinct(); ++j)
        parts[static_cast<std::size_t>(j - 1)] = m.multiplicity(j);
    for (const auto& x : c) {
        if (--parts[static_cast<std::size_t>(x.value - 1)] < 0) return Rational(0);
    }
    BigInt num = multinomial(m.size() - static_cast<long>(c.size()), parts);
    std::vector<long> full(m.multiplicities().begin(), m.multiplicities().end());
    BigInt den = multinomial(m.size(), full);
    return make_rational(num, den);
}

// Exact total moment for arbitrary bags: dedup, then either the closed form
// (distinct positions) or exactly zero (a position asked to hold two values).
class MPermExactMoments {
  public:
    explicit MPermExactMoments(Multiset m) : m_(std::move(m)) {}

    Rational operator()(MPermBag sub) const {
        std::sort(sub.begin(), sub.end());
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        for (std::size_t t = 1; t < sub.size(); ++t)
            if (sub[t].pos == sub[t - 1].pos) return Rational(0);
        auto it = cache_.find(sub);
        if (it != cache_.end()) return it->second;
        Rational v = joint_moment_mperm_closed(m_, sub);
        cache_.emplace(std::move(sub), v);
        return v;
    }

    const Multiset& multiset() const { return m_; }

  private:
    Multiset m_;
    mutable std::map<MPermBag, Rational> cache_;
};

// Enumeration oracle over S_M; the independent route next to the closed form.
class MPermBruteMoments {
  public:
    explicit MPermBruteMoments(Multiset m, int cap = kDefaultWordEnumCap)
        : m_(std::move(m)), cap_(cap) {}

    Rational operator()(MPermBag sub) const {
        std::sort(sub.begin(), sub.end());
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        auto it = cache_.find(sub);
        if (it != cache_.end()) return it->second;
        BigInt hits(0), total(0);
        for_each_multiset_perm(
            m_,
            [&](const Word& w) {
                ++total;
                for (const auto& x : sub)
                    if (w[static_cast<std::size_t>(x.pos - 1)] != x.value) return;
                ++hits;
            },
            cap_);
        Rational v = make_rational(hits, total);
        cache_.emplace(std::move(sub), v);
        return v;
    }

  private:
    Multiset m_;
    int cap_;
    mutable std::map<MPermBag, Rational> cache_;
};

inline Rational joint_moment_bruteforce_mperm(const Multiset& m, const MPermBag& c,
                                              int cap = kDefaultWordEnumCap) {
    return MPermBruteMoments(m, cap)(c);
}

// ---------------------------------------------------------------------------
// Set partition moments
// ---------------------------------------------------------------------------

// Unconditional moments by one-time enumeration of P([n]); arc sets are kept
// as bitmasks so each moment is a subset-containment count.
class SetPartEnumMoments {
  public:
    explicit SetPartEnumMoments(int n, int cap = kDefaultPartitionEnumCap) : n_(n) {
        if (n < 1) throw std::domain_error("SetPartEnumMoments: n must be >= 1");
        if (n > 15) throw size_limit_error("SetPartEnumMoments: arc mask needs n <= 15");
        for_each_set_partition(
            n,
            [&](const SetPartition& p) {
                unsigned __int128 mask = 0;
                for (const auto& [i, j] : p.arcs()) mask |= arc_bit(i, j);
                masks_.push_back(mask);
            },
            cap);
        bell_ = BigInt(static_cast<long>(masks_.size()));
    }

    Rational operator()(ArcBag sub) const {
        std::sort(sub.begin(), sub.end());
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        auto it = cache_.find(sub);
        if (it != cache_.end()) return it->second;
        unsigned __int128 want = 0;
        for (const auto& x : sub) {
            if (!(1 <= x.i && x.i < x.j && x.j <= n_))
                throw std::domain_error("arc indicator out of range");
            want |= arc_bit(x.i, x.j);
        }
        long hits = 0;
        for (auto m : masks_)
            if ((m & want) == want) ++hits;
        Rational v = make_rational(BigInt(hits), bell_);
        cache_.emplace(std::move(sub), v);
        return v;
    }

    int n() const { return n_; }
    const BigInt& bell() const { return bell_; }

  private:
    unsigned __int128 arc_bit(int i, int j) const {
        // arcs (i<j) indexed lexicographically
        int idx = (i - 1) * (2 * n_ - i) / 2 + (j - i - 1);
        return static_cast<unsigned __int128>(1) << idx;
    }

    int n_;
    BigInt bell_;
    std::vector<unsigned __int128> masks_;
    mutable std::map<ArcBag, Rational> cache_;
};

inline Rational joint_moment_bruteforce_setpart(int n, const ArcBag& c,
                                                int cap = kDefaultPartitionEnumCap) {
    return SetPartEnumMoments(n, cap)(c);
}

// E[prod_{(i,j) in B} X_ij | M = m]: 1/m per arc end, (m - a(g))/m for every
// other point g under a(g) arcs. Incompatible bags and nonpositive factors
// give exactly 0.
inline Rational cond_joint_moment_setpart(int n, long m, ArcBag sub) {
    if (m < 1) throw std::domain_error("cond_joint_moment_setpart: m must be >= 1");
    std::sort(sub.begin(), sub.end());
    sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    if (sub.empty()) return Rational(1);
    std::set<int> starts, ends;
    for (const auto& x : sub) {
        if (!(1 <= x.i && x.i < x.j && x.j <= n))
            throw std::domain_error("arc indicator out of range");
        if (!starts.insert(x.i).second) return Rational(0);  // shared start: incompatible
        if (!ends.insert(x.j).second) return Rational(0);    // shared end: incompatible
    }
    BigInt num(1);
    int factors = 0;
    for (int g = 1; g <= n; ++g) {
        if (ends.count(g)) continue;
        long over = 0;
        for (const auto& x : sub)
            if (x.i < g && g < x.j) ++over;
        if (m - over <= 0) return Rational(0);
        num *= BigInt(m - over);
        ++factors;
    }
    BigInt den(1);
    for (int t = 0; t < factors + static_cast<int>(sub.size()); ++t) den *= BigInt(m);
    return make_rational(num, den);
}

// Conditional-moment oracle at fixed (n, m) for cumulant machinery.
class CondArcMoments {
  public:
    CondArcMoments(int n, long m) : n_(n), m_(m) {}
    Rational operator()(const ArcBag& sub) const { return cond_joint_moment_setpart(n_, m_, sub); }

  private:
    int n_;
    long m_;
};

// ---------------------------------------------------------------------------
// Quasi-factorization factors
// ---------------------------------------------------------------------------

// P_Delta(u) = prod_{delta subset Delta} u_delta^{(-1)^{|Delta|-|delta|}} with
// the 0/0 -> 0 convention. u is indexed by subset bitmask (size 2^r).
inline Rational quasi_fact_factor(const std::vector<Rational>& u, std::uint32_t delta_mask) {
    if (u.empty() || u[0] == 0)
        throw std::domain_error("quasi_fact_factor: u_empty must be nonzero");
    if (delta_mask >= u.size()) throw std::domain_error("quasi_fact_factor: mask out of range");
    int sz = __builtin_popcount(delta_mask);
    Rational num(1), den(1);
    std::uint32_t sub = delta_mask;
    while (true) {
        bool plus = ((sz - __builtin_popcount(sub)) % 2) == 0;
        (plus ? num : den) *= u[sub];
        if (sub == 0) break;
        sub = (sub - 1) & delta_mask;
    }
    if (den == 0) {
        if (num == 0) return Rational(0);  // 0/0 convention
        throw std::domain_error("quasi_fact_factor: division by zero outside 0/0 convention");
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Law of total cumulance
// ---------------------------------------------------------------------------

struct TotalCumulanceReport {
    int n = 0;
    ArcBag bag;
    Rational lhs_exact;     // kappa(B) over uniform P([n]), by enumeration
    double rhs = 0.0;       // sum over partitions of outer cumulants of conditional cumulants
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// LHS: exact kappa(B). RHS: Brillinger's formula with conditional cumulants
// (exact rationals in m) averaged over the truncated urn law.
inline TotalCumulanceReport total_cumulance_check(int n, ArcBag bag, double tail_tol,
                                                  int enum_cap = kDefaultPartitionEnumCap) {
    std::sort(bag.begin(), bag.end());
    const int r = static_cast<int>(bag.size());
    if (r == 0) throw std::domain_error("total_cumulance_check: empty bag");

    TotalCumulanceReport rep;
    rep.n = n;
    rep.bag = bag;

    SetPartEnumMoments uncond(n, enum_cap);
    rep.lhs_exact = joint_cumulant<ArcIndicator>(uncond, bag);

    MUrnLaw law(n, tail_tol);
    long double rhs = 0.0L;
    for (const auto& rho : detail::cached_index_partitions(r)) {
        // conditional cumulant of each block, tabulated over the support
        const std::size_t k = rho.blocks.size();
        std::vector<std::vector<long double>> f(k);
        for (std::size_t b = 0; b < k; ++b) {
            ArcBag block;
            for (int t : rho.blocks[b]) block.push_back(bag[static_cast<std::size_t>(t)]);
            f[b].reserve(static_cast<std::size_t>(law.m_max()));
            for (long m = 1; m <= law.m_max(); ++m) {
                CondArcMoments cond(n, m);
                f[b].push_back(static_cast<long double>(
                    to_double(joint_cumulant<ArcIndicator>(cond, block))));
            }
        }
        // outer joint cumulant of the k conditional-cumulant variables
        long double outer = 0.0L;
        for (const auto& pi : detail::cached_index_partitions(static_cast<int>(k))) {
            long double term = static_cast<long double>(pi.mobius.get_d());
            for (const auto& blk : pi.blocks) {
                long double e = 0.0L;
                for (long m = 1; m <= law.m_max(); ++m) {
                    long double prod = law.weight(m);
                    for (int idx : blk) prod *= f[static_cast<std::size_t>(idx)][static_cast<std::size_t>(m - 1)];
                    e += prod;
                }
                term *= e;
            }
            outer += term;
        }
        rhs += outer;
    }
    rep.rhs = static_cast<double>(rhs);
    double lhs = to_double(rep.lhs_exact);
    rep.discrepancy = std::abs(lhs - rep.rhs);
    rep.tolerance = 10.0 * tail_tol * std::abs(lhs) + 1e-9;
    rep.pass = rep.discrepancy < rep.tolerance;
    return rep;
}

}  // namespace patternlab
