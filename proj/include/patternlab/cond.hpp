#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "enumeration.hpp"
#include "laurent.hpp"
#include "moments.hpp"
#include "murn.hpp"
#include "patterns.hpp"
#include "rational.hpp"
#include "set_partition.hpp"

namespace patternlab {

// Per-segment arc overlaps of a pattern: seg[i] counts arcs strictly above
// the gap left of position i (seg[1] = 0 always), over[i] counts arcs
// strictly above position i itself.
struct OverlapProfile {
    int ell = 0;
    std::vector<int> seg;           // 1-based, size ell
    std::vector<int> over;          // 1-based, size ell
    std::vector<int> nonzero_seg;   // the a_1..a_t of the F-function
    int t = 0;

    explicit OverlapProfile(const ArcPattern& pat) : ell(pat.length()) {
        seg.assign(static_cast<std::size_t>(ell) + 1, 0);
        over.assign(static_cast<std::size_t>(ell) + 1, 0);
        for (const auto& [i, j] : pat.arcs())
            for (int s = 1; s <= ell; ++s) {
                if (i <= s - 1 && s <= j) ++seg[static_cast<std::size_t>(s)];  // arc spans gap [s-1, s]
                if (i < s && s < j) ++over[static_cast<std::size_t>(s)];
            }
        for (int s = 1; s <= ell; ++s)
            if (seg[static_cast<std::size_t>(s)] > 0) nonzero_seg.push_back(seg[static_cast<std::size_t>(s)]);
        t = static_cast<int>(nonzero_seg.size());
    }

    int max_overlap(const ArcPattern& pat) const {
        int mx = 0;
        for (int s = 1; s <= ell; ++s) {
            mx = std::max(mx, seg[static_cast<std::size_t>(s)]);
            if (!pat.is_arc_end(s)) mx = std::max(mx, over[static_cast<std::size_t>(s)]);
        }
        return mx;
    }
};

// P((x_1..x_l) is an occurrence of the pattern | M = m); this is the
// conditional joint moment of the embedded arcs.
inline Rational cond_occurrence_prob(int n, long m, const ArcPattern& pat,
                                     const std::vector<int>& x) {
    if (static_cast<int>(x.size()) != pat.length())
        throw std::domain_error("cond_occurrence_prob: tuple size != pattern length");
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] < 1 || x[t] > n) throw std::domain_error("cond_occurrence_prob: position out of range");
        if (t > 0 && x[t] <= x[t - 1])
            throw std::domain_error("cond_occurrence_prob: positions must be strictly increasing");
    }
    ArcBag bag;
    for (const auto& [i, j] : pat.arcs())
        bag.push_back({x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]});
    return cond_joint_moment_setpart(n, m, bag);
}

namespace detail {

// F_{a_1..a_t;l}(n, m) by the sliding recurrence
//   F_t(n) = F_{t-1}(n-1) + (1 - a_t/m) F_t(n-1),  F_0(n) = C(n, l-t).
// T is Rational (exact) or long double (large-n evaluation).
template <class T>
T f_function_impl(const std::vector<int>& a_list, int ell, int n, long m) {
    const int t = static_cast<int>(a_list.size());
    std::vector<T> cur(static_cast<std::size_t>(n) + 1);
    for (int np = 0; np <= n; ++np) {
        if constexpr (std::is_same_v<T, Rational>)
            cur[static_cast<std::size_t>(np)] = Rational(binomial(np, ell - t));
        else
            cur[static_cast<std::size_t>(np)] =
                static_cast<T>(binomial(np, ell - t).get_d());
    }
    for (int d = 1; d <= t; ++d) {
        T q;
        if constexpr (std::is_same_v<T, Rational>)
            q = Rational(1) - make_rational(a_list[static_cast<std::size_t>(d - 1)], m);
        else
            q = T(1) - static_cast<T>(a_list[static_cast<std::size_t>(d - 1)]) / static_cast<T>(m);
        std::vector<T> nxt(static_cast<std::size_t>(n) + 1, T(0));
        for (int np = 1; np <= n; ++np)
            nxt[static_cast<std::size_t>(np)] =
                cur[static_cast<std::size_t>(np - 1)] + q * nxt[static_cast<std::size_t>(np - 1)];
        cur = std::move(nxt);
    }
    return cur[static_cast<std::size_t>(n)];
}

}  // namespace detail

// F function of the conditional-expectation resummation. Base case t = 0 is
// C(n, l); equals the direct nested sum over y_1..y_t.
inline Rational F_function(const std::vector<int>& a_list, int ell, int n, long m) {
    if (static_cast<int>(a_list.size()) > ell)
        throw std::domain_error("F_function: need t <= l");
    for (int a : a_list)
        if (a < 1) throw std::domain_error("F_function: overlaps must be >= 1");
    if (m < 1) throw std::domain_error("F_function: m must be >= 1");
    if (n < 0) return Rational(0);
    return detail::f_function_impl<Rational>(a_list, ell, n, m);
}

inline double F_function_f(const std::vector<int>& a_list, int ell, int n, long m) {
    return static_cast<double>(detail::f_function_impl<long double>(a_list, ell, n, m));
}

// R_0(m): product over in-pattern positions that are not arc ends of
// (m - over_i)/m; a Laurent polynomial of degree 0 in m.
inline Rational r0_factor(const ArcPattern& pat, const OverlapProfile& prof, long m) {
    Rational r(1);
    for (int s = 1; s <= pat.length(); ++s) {
        if (pat.is_arc_end(s)) continue;
        long over = prof.over[static_cast<std::size_t>(s)];
        if (m - over <= 0) return Rational(0);
        r *= make_rational(m - over, m);
    }
    return r;
}

// Path (i): direct sum of cond_occurrence_prob over all C(n, l) tuples.
inline Rational cond_expectation_direct(int n, long m, const ArcPattern& pat) {
    const int l = pat.length();
    if (l > n) return Rational(0);
    Rational acc(0);
    std::vector<int> x(static_cast<std::size_t>(l));
    for (int s = 0; s < l; ++s) x[static_cast<std::size_t>(s)] = s + 1;
    while (true) {
        acc += cond_occurrence_prob(n, m, pat, x);
        int s = l - 1;
        while (s >= 0 && x[static_cast<std::size_t>(s)] == n - l + s + 1) --s;
        if (s < 0) break;
        ++x[static_cast<std::size_t>(s)];
        for (int u = s + 1; u < l; ++u) x[static_cast<std::size_t>(u)] = x[static_cast<std::size_t>(u - 1)] + 1;
    }
    return acc;
}

// Path (ii): E[Occ | M=m] = R_0(m)/m^a * F_{a_1..a_t;l}(n, m), valid for
// m >= max overlap (below that the direct clamped sum is the truth).
inline Rational cond_expectation_resummed(int n, long m, const ArcPattern& pat) {
    const int l = pat.length();
    if (l > n) return Rational(0);
    OverlapProfile prof(pat);
    if (m < prof.max_overlap(pat))
        throw std::domain_error("cond_expectation_resummed: m below max overlap");
    Rational r0 = r0_factor(pat, prof, m);
    if (r0 == 0) return Rational(0);
    BigInt ma(1);
    for (int s = 0; s < pat.arc_count(); ++s) ma *= BigInt(m);
    return r0 * make_rational(BigInt(1), ma) * F_function(prof.nonzero_seg, l, n, m);
}

inline constexpr int kCondDirectCap = 20;

// E[Occ | M=m], exact. Both routes are evaluated (and must agree) whenever
// the direct sum is affordable. Below the max overlap the expectation is
// identically zero: arcs above a common point lie in distinct blocks, so an
// occurrence would need more blocks than urns.
inline Rational cond_expectation_exact(int n, long m, const ArcPattern& pat) {
    const int l = pat.length();
    if (l > n) return Rational(0);
    OverlapProfile prof(pat);
    const bool resummable = m >= prof.max_overlap(pat);
    if (n <= kCondDirectCap) {
        Rational direct = cond_expectation_direct(n, m, pat);
        if (resummable) {
            Rational resummed = cond_expectation_resummed(n, m, pat);
            if (direct != resummed)
                throw std::logic_error("cond_expectation_exact: computation paths disagree");
        }
        return direct;
    }
    if (!resummable) return Rational(0);
    return cond_expectation_resummed(n, m, pat);
}

// Float route of path (ii) for large n.
inline double cond_expectation_f(int n, long m, const ArcPattern& pat) {
    const int l = pat.length();
    if (l > n) return 0.0;
    OverlapProfile prof(pat);
    if (m < prof.max_overlap(pat)) return 0.0;  // too few urns for the overlapping arcs
    long double r0 = 1.0L;
    for (int s = 1; s <= l; ++s) {
        if (pat.is_arc_end(s)) continue;
        r0 *= static_cast<long double>(m - prof.over[static_cast<std::size_t>(s)]) / static_cast<long double>(m);
    }
    long double ma = 1.0L;
    for (int s = 0; s < pat.arc_count(); ++s) ma *= static_cast<long double>(m);
    long double f = detail::f_function_impl<long double>(prof.nonzero_seg, l, n, m);
    return static_cast<double>(r0 / ma * f);
}

// Top-degree part of F as a Laurent polynomial, evaluated at (n, m):
//   sum_{j_0+...+j_t = l-t} (-1)^{j_1+...+j_t} n^{j_0} m^{j_1+...+j_t+t}
//        / (j_0! a_1^{j_1+1} ... a_t^{j_t+1}).
inline LaurentPoly leading_term_poly(const std::vector<int>& a_list, int ell) {
    const int t = static_cast<int>(a_list.size());
    if (t > ell) throw std::domain_error("leading_term: need t <= l");
    for (int a : a_list)
        if (a < 1) throw std::domain_error("leading_term: overlaps must be >= 1");
    LaurentPoly poly;
    std::vector<int> j(static_cast<std::size_t>(t), 0);  // j_1..j_t; j_0 is the slack
    auto emit = [&](int j0) {
        int jsum = ell - t - j0;
        BigInt den = factorial(static_cast<unsigned>(j0));
        for (int s = 1; s <= t; ++s) {
            for (int e = 0; e <= j[static_cast<std::size_t>(s - 1)]; ++e)
                den *= BigInt(a_list[static_cast<std::size_t>(s - 1)]);
        }
        poly.add(j0, jsum + t, make_rational(BigInt(jsum % 2 == 0 ? 1 : -1), den));
    };
    auto rec = [&](auto&& self, int s, int remaining) -> void {
        if (s == t) {
            emit(remaining);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            j[static_cast<std::size_t>(s)] = v;
            self(self, s + 1, remaining - v);
        }
    };
    rec(rec, 0, ell - t);
    return poly;
}

inline Rational leading_term(const std::vector<int>& a_list, int ell, int n, long m) {
    return leading_term_poly(a_list, ell).evaluate(Rational(n), Rational(static_cast<long>(m)));
}

// Var over the truncated urn law of E[Occ | M]; the paper's lower-bound
// quantity Var[E(Occ|M)].
inline double var_cond_expectation(int n, const ArcPattern& pat, double tail_tol) {
    if (n < pat.length()) return 0.0;
    MUrnLaw law(n, tail_tol);
    std::vector<long double> vals(static_cast<std::size_t>(law.m_max()) + 1, 0.0L);
    for (long m = 1; m <= law.m_max(); ++m)
        vals[static_cast<std::size_t>(m)] = static_cast<long double>(cond_expectation_f(n, m, pat));
    long double mean = 0.0L;
    for (long m = 1; m <= law.m_max(); ++m) mean += law.weight(m) * vals[static_cast<std::size_t>(m)];
    long double var = 0.0L;
    for (long m = 1; m <= law.m_max(); ++m) {
        long double d = vals[static_cast<std::size_t>(m)] - mean;
        var += law.weight(m) * d * d;
    }
    return static_cast<double>(var);
}

}  // namespace patternlab
