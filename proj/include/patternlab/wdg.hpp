#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "indicators.hpp"
#include "moments.hpp"
#include "multiset.hpp"
#include "patterns.hpp"
#include "rational.hpp"
#include "set_partition.hpp"

namespace patternlab {

// ---------------------------------------------------------------------------
// The two concrete weighted dependency graphs and a generic dense one
// ---------------------------------------------------------------------------

// G^M on A^M = {X_i^j}: weight 1 on equal positions, 1/a_j on equal values,
// 1/n otherwise.
struct MPermGraph {
    Multiset m;

    Rational weight(const MPermIndicator& x, const MPermIndicator& y) const {
        if (x.pos == y.pos) return Rational(1);
        if (x.value == y.value) return make_rational(1, m.multiplicity(x.value));
        return make_rational(1, m.size());
    }
};

inline MPermGraph build_gM(const Multiset& m) { return MPermGraph{m}; }

// G^n on A^n = {X_ij}: weight 1 on a shared start or shared end, 1/n otherwise.
struct SetPartGraph {
    int n = 0;

    Rational weight(const ArcIndicator& x, const ArcIndicator& y) const {
        if (x.i == y.i || x.j == y.j) return Rational(1);
        return make_rational(1, n);
    }
};

inline SetPartGraph build_gN(int n) {
    if (n < 2) throw std::domain_error("build_gN: n must be >= 2");
    return SetPartGraph{n};
}

// Explicit weight matrix over vertices 0..k-1 (absent edge = 0).
struct DenseGraph {
    std::vector<std::vector<Rational>> w;

    explicit DenseGraph(int k) : w(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k), Rational(0))) {}

    void set(int u, int v, const Rational& value) {
        w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = value;
        w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = value;
    }

    Rational weight(int u, int v) const { return w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]; }
    int size() const { return static_cast<int>(w.size()); }
};

// ---------------------------------------------------------------------------
// Psi weight functionals
// ---------------------------------------------------------------------------

// Psi(B) = prod over distinct X_i^j in B of a_j / n.
inline Rational psi_mperm(const Multiset& m, MPermBag bag) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    Rational p(1);
    for (const auto& x : bag) p *= make_rational(x.value >= 1 ? m.multiplicity(x.value) : 0, m.size());
    return p;
}

// Psi(B) = n^{-#distinct arcs in B}.
inline Rational psi_setpart(int n, ArcBag bag) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    BigInt den(1);
    for (std::size_t t = 0; t < bag.size(); ++t) den *= BigInt(n);
    return make_rational(BigInt(1), den);
}

// ---------------------------------------------------------------------------
// MWST: maximal weight (product of edge weights) of a spanning tree
// ---------------------------------------------------------------------------

// Greedy on weight order; exact because all weights lie in [0,1], so the
// product objective is the classic maximum spanning tree under log.
template <class Ind, class Graph>
Rational mwst(const Graph& g, std::vector<Ind> bag) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    const int k = static_cast<int>(bag.size());
    if (k == 0) throw std::domain_error("mwst: empty vertex multiset");
    if (k == 1) return Rational(1);

    struct Edge {
        Rational w;
        int u, v;
    };
    std::vector<Edge> edges;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) {
            Rational w = g.weight(bag[static_cast<std::size_t>(u)], bag[static_cast<std::size_t>(v)]);
            if (w > 0) edges.push_back({w, u, v});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });

    std::vector<int> parent(static_cast<std::size_t>(k));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };

    Rational product(1);
    int used = 0;
    for (const auto& e : edges) {
        int ru = find(e.u), rv = find(e.v);
        if (ru == rv) continue;
        parent[static_cast<std::size_t>(ru)] = rv;
        product *= e.w;
        if (++used == k - 1) break;
    }
    if (used != k - 1) return Rational(0);  // disconnected: no spanning tree
    return product;
}

// ---------------------------------------------------------------------------
// Monomials and power graphs
// ---------------------------------------------------------------------------

// A monomial is a multiset of base indicators, kept sorted.
template <class Ind>
using Monomial = std::vector<Ind>;

// W(I,J): 1 on a shared element, else the best edge between I and J.
template <class Ind, class Graph>
Rational monomial_weight(const Graph& g, const Monomial<Ind>& I, const Monomial<Ind>& J) {
    for (const auto& x : I)
        for (const auto& y : J)
            if (x == y) return Rational(1);
    Rational best(0);
    for (const auto& x : I)
        for (const auto& y : J) {
            Rational w = g.weight(x, y);
            if (w > best) best = w;
        }
    return best;
}

// d-th power of a base graph: vertices are monomials of degree <= d, edge
// weights are W(I,J). Vertices are never materialized here.
template <class Ind, class Graph>
struct PowerGraph {
    Graph base;
    int degree;

    Rational weight(const Monomial<Ind>& I, const Monomial<Ind>& J) const {
        return monomial_weight<Ind>(base, I, J);
    }
};

template <class Ind, class Graph>
PowerGraph<Ind, Graph> power_graph(const Graph& g, int d) {
    if (d < 1) throw std::domain_error("power_graph: d must be >= 1");
    return PowerGraph<Ind, Graph>{g, d};
}

// Lifted Psi of a bag of monomials is base Psi of the multiset union.
inline Rational psi_mperm_monomials(const Multiset& m, const std::vector<Monomial<MPermIndicator>>& bags) {
    MPermBag all;
    for (const auto& b : bags) all.insert(all.end(), b.begin(), b.end());
    return psi_mperm(m, std::move(all));
}

inline Rational psi_setpart_monomials(int n, const std::vector<Monomial<ArcIndicator>>& bags) {
    ArcBag all;
    for (const auto& b : bags) all.insert(all.end(), b.begin(), b.end());
    return psi_setpart(n, std::move(all));
}

// The monomial family of a pattern: one monomial per (position tuple, value
// tuple) for words, one per position tuple for set partitions.
inline std::vector<Monomial<MPermIndicator>> mperm_pattern_monomials(const Multiset& m,
                                                                     const PermPattern& tau) {
    const int n = static_cast<int>(m.size());
    const int l = tau.size();
    const int k = m.distinct();
    std::vector<Monomial<MPermIndicator>> out;
    if (l > n || l > k) return out;
    std::vector<int> ipick(static_cast<std::size_t>(l)), jpick(static_cast<std::size_t>(l));
    auto next_comb = [](std::vector<int>& c, int limit) {
        int l2 = static_cast<int>(c.size());
        int t = l2 - 1;
        while (t >= 0 && c[static_cast<std::size_t>(t)] == limit - l2 + t) --t;
        if (t < 0) return false;
        ++c[static_cast<std::size_t>(t)];
        for (int s = t + 1; s < l2; ++s) c[static_cast<std::size_t>(s)] = c[static_cast<std::size_t>(s - 1)] + 1;
        return true;
    };
    for (int t = 0; t < l; ++t) ipick[static_cast<std::size_t>(t)] = t;
    do {
        for (int t = 0; t < l; ++t) jpick[static_cast<std::size_t>(t)] = t;
        do {
            Monomial<MPermIndicator> mono;
            mono.reserve(static_cast<std::size_t>(l));
            for (int t = 1; t <= l; ++t)
                mono.push_back({ipick[static_cast<std::size_t>(t - 1)] + 1,
                                jpick[static_cast<std::size_t>(tau.at(t) - 1)] + 1});
            std::sort(mono.begin(), mono.end());
            out.push_back(std::move(mono));
        } while (next_comb(jpick, k));
    } while (next_comb(ipick, n));
    return out;
}

inline std::vector<Monomial<ArcIndicator>> setpart_pattern_monomials(int n, const ArcPattern& pat) {
    const int l = pat.length();
    std::vector<Monomial<ArcIndicator>> out;
    if (l > n) return out;
    std::vector<int> pick(static_cast<std::size_t>(l));
    for (int t = 0; t < l; ++t) pick[static_cast<std::size_t>(t)] = t + 1;
    while (true) {
        Monomial<ArcIndicator> mono;
        for (const auto& [i, j] : pat.arcs())
            mono.push_back({pick[static_cast<std::size_t>(i - 1)], pick[static_cast<std::size_t>(j - 1)]});
        std::sort(mono.begin(), mono.end());
        out.push_back(std::move(mono));
        int t = l - 1;
        while (t >= 0 && pick[static_cast<std::size_t>(t)] == n - l + t + 1) --t;
        if (t < 0) break;
        ++pick[static_cast<std::size_t>(t)];
        for (int s = t + 1; s < l; ++s) pick[static_cast<std::size_t>(s)] = pick[static_cast<std::size_t>(s - 1)] + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parameters R and T_h
// ---------------------------------------------------------------------------

// R = sum_alpha Psi({alpha}); closed forms for the two pattern families.
inline Rational param_R_mperm(const Multiset& m, const PermPattern& tau) {
    const int l = tau.size();
    if (l > m.size() || l > m.distinct()) return Rational(0);
    BigInt nl(1);
    for (int t = 0; t < l; ++t) nl *= BigInt(m.size());
    return make_rational(binomial(m.size(), l) * m.elementary_symmetric(l), nl);
}

inline Rational param_R_setpart(int n, const ArcPattern& pat) {
    if (pat.length() > n) return Rational(0);
    BigInt na(1);
    for (int t = 0; t < pat.arc_count(); ++t) na *= BigInt(n);
    return make_rational(binomial(n, pat.length()), na);
}

// Brute-force route: sum lifted Psi over the materialized monomial family.
template <class Ind, class PsiFn>
Rational param_R_bruteforce(const std::vector<Monomial<Ind>>& family, PsiFn&& psi) {
    Rational acc(0);
    for (const auto& mono : family) acc += psi(std::vector<Monomial<Ind>>{mono});
    return acc;
}

// T_h by exhaustive scan over h-multisets of the family (the maximum depends
// only on the multiset). Caps keep this to desk scale.
template <class Ind, class Graph, class PsiFn>
Rational param_Th_bruteforce(const std::vector<Monomial<Ind>>& family, const Graph& g, PsiFn&& psi,
                             int h, std::size_t tuple_limit = 2000000) {
    if (h < 1 || h > 2) throw std::domain_error("param_Th_bruteforce: h must be 1 or 2");
    if (family.empty()) return Rational(0);
    const std::size_t fs = family.size();
    {
        std::size_t tuples = (h == 1) ? fs : fs * (fs + 1) / 2;
        if (tuples * fs > tuple_limit)
            throw size_limit_error("param_Th_bruteforce: tuple space too large");
    }
    Rational best(0);
    std::vector<std::size_t> alpha(static_cast<std::size_t>(h), 0);
    auto advance = [&]() {
        int t = h - 1;
        while (t >= 0 && alpha[static_cast<std::size_t>(t)] == fs - 1) --t;
        if (t < 0) return false;
        std::size_t v = ++alpha[static_cast<std::size_t>(t)];
        for (int s = t + 1; s < h; ++s) alpha[static_cast<std::size_t>(s)] = v;
        return true;
    };
    do {
        std::vector<Monomial<Ind>> abags;
        abags.reserve(alpha.size());
        for (auto idx : alpha) abags.push_back(family[idx]);
        Rational denom = psi(abags);
        if (denom == 0) continue;
        Rational sum(0);
        for (const auto& beta : family) {
            // W({beta}, {alpha_1..alpha_h}) at the monomial level
            Rational w(0);
            bool shared = false;
            for (const auto& ab : abags) {
                if (ab == beta) {
                    shared = true;
                    break;
                }
                Rational cand = monomial_weight<Ind>(g, beta, ab);
                if (cand == 1) {
                    shared = true;
                    break;
                }
                if (cand > w) w = cand;
            }
            if (shared) w = Rational(1);
            if (w == 0) continue;
            auto withb = abags;
            withb.push_back(beta);
            sum += w * psi(withb) / denom;
        }
        if (sum > best) best = sum;
    } while (advance());
    return best;
}

inline Rational variance_upper_bound(const Rational& r, const Rational& t1, const Rational& c2) {
    if (r < 0 || t1 < 0 || c2 < 0) throw std::domain_error("variance_upper_bound: negative input");
    return Rational(2) * c2 * r * t1;
}

// Bound parameters of a pattern family: R, the computed T_h values, the
// natural scale Q they are measured against, and Var <= 2 C2 R T_1.
struct ParamReport {
    Rational R;
    std::map<int, Rational> T;   // h -> T_h
    Rational Q;                  // e_{l-1}(M) for words, n^{l-a-1} for partitions
    Rational variance_upper;     // 2 C2 R T_1
};

inline ParamReport param_report_mperm(const Multiset& m, const PermPattern& tau,
                                      const Rational& c2, int max_h = 1) {
    ParamReport rep;
    rep.R = param_R_mperm(m, tau);
    auto fam = mperm_pattern_monomials(m, tau);
    auto g = build_gM(m);
    auto psi = [&](const std::vector<Monomial<MPermIndicator>>& bags) {
        return psi_mperm_monomials(m, bags);
    };
    for (int h = 1; h <= max_h; ++h)
        rep.T[h] = param_Th_bruteforce<MPermIndicator>(fam, g, psi, h);
    rep.Q = Rational(m.elementary_symmetric(tau.size() - 1));
    rep.variance_upper = variance_upper_bound(rep.R, rep.T[1], c2);
    return rep;
}

inline ParamReport param_report_setpart(int n, const ArcPattern& pat, const Rational& c2,
                                        int max_h = 1) {
    ParamReport rep;
    rep.R = param_R_setpart(n, pat);
    auto fam = setpart_pattern_monomials(n, pat);
    auto g = build_gN(n);
    auto psi = [&](const std::vector<Monomial<ArcIndicator>>& bags) {
        return psi_setpart_monomials(n, bags);
    };
    for (int h = 1; h <= max_h; ++h)
        rep.T[h] = param_Th_bruteforce<ArcIndicator>(fam, g, psi, h);
    int degree = pat.length() - pat.arc_count() - 1;
    Rational q(1);
    for (int t = 0; t < std::abs(degree); ++t) q *= Rational(n);
    rep.Q = degree >= 0 ? q : Rational(1) / q;
    rep.variance_upper = variance_upper_bound(rep.R, rep.T[1], c2);
    return rep;
}

// ---------------------------------------------------------------------------
// Empirical C_r scan
// ---------------------------------------------------------------------------

template <class Ind>
struct CrReport {
    int r = 0;
    Rational max_ratio;          // max |kappa| / (Psi * MWST)
    std::vector<Ind> argmax_bag;
    std::vector<std::vector<Ind>> violations;  // MWST = 0 with kappa != 0
    long bags_scanned = 0;
};

// Max of |kappa(B)| / (Psi(B) MWST(G[B])) over repetition-free bags of size r.
// A disconnected bag with nonzero cumulant falsifies the theorem and is
// reported as a violation instead of a ratio.
template <class Ind, class Graph, class PsiFn, class Oracle>
CrReport<Ind> estimate_Cr(const std::vector<Ind>& vertices, const Graph& g, PsiFn&& psi,
                          Oracle&& oracle, int r) {
    if (r < 2) throw std::domain_error("estimate_Cr: r must be >= 2");
    CrReport<Ind> rep;
    rep.r = r;
    const int nverts = static_cast<int>(vertices.size());
    if (nverts < r) return rep;
    std::vector<int> pick(static_cast<std::size_t>(r));
    for (int t = 0; t < r; ++t) pick[static_cast<std::size_t>(t)] = t;
    std::vector<Ind> bag(static_cast<std::size_t>(r));
    while (true) {
        for (int t = 0; t < r; ++t) bag[static_cast<std::size_t>(t)] = vertices[static_cast<std::size_t>(pick[static_cast<std::size_t>(t)])];
        ++rep.bags_scanned;
        Rational kappa = joint_cumulant<Ind>(oracle, bag, r);
        Rational tree = mwst<Ind>(g, bag);
        if (tree == 0) {
            if (kappa != 0) rep.violations.push_back(bag);
        } else if (kappa != 0) {
            Rational akappa = abs(kappa);
            Rational ratio = akappa / (psi(bag) * tree);
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.argmax_bag = bag;
            }
        }
        int t = r - 1;
        while (t >= 0 && pick[static_cast<std::size_t>(t)] == nverts - r + t) --t;
        if (t < 0) break;
        ++pick[static_cast<std::size_t>(t)];
        for (int s = t + 1; s < r; ++s) pick[static_cast<std::size_t>(s)] = pick[static_cast<std::size_t>(s - 1)] + 1;
    }
    return rep;
}

// Vertex families A^M and A^n.
inline std::vector<MPermIndicator> mperm_vertices(const Multiset& m) {
    std::vector<MPermIndicator> out;
    for (int i = 1; i <= m.size(); ++i)
        for (int j = 1; j <= m.distinct(); ++j) out.push_back({i, j});
    return out;
}

inline std::vector<ArcIndicator> setpart_vertices(int n) {
    std::vector<ArcIndicator> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
    return out;
}

}  // namespace patternlab
