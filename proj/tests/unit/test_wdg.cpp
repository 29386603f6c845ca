#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "patternlab/samplers.hpp"
#include "patternlab/wdg.hpp"
#include "support/oracles.hpp"

using namespace patternlab;

TEST_CASE("G^M edge weights") {
    auto g = build_gM(Multiset::parse("1^2,2"));
    CHECK(g.weight({1, 1}, {2, 1}) == make_rational(1, 2));  // same value, a_1 = 2
    CHECK(g.weight({1, 1}, {1, 2}) == 1);                     // same position
    CHECK(g.weight({1, 1}, {2, 2}) == make_rational(1, 3));   // generic, 1/n
}

TEST_CASE("G^n edge weights") {
    auto g = build_gN(4);
    CHECK(g.weight({1, 2}, {1, 3}) == 1);  // shared start
    CHECK(g.weight({1, 3}, {2, 3}) == 1);  // shared end
    CHECK(g.weight({1, 2}, {3, 4}) == make_rational(1, 4));
    CHECK_THROWS_AS(build_gN(1), std::domain_error);
}

TEST_CASE("Psi weight functionals") {
    auto m = Multiset::parse("1^2,2^2,3");
    CHECK(psi_mperm(m, {{1, 1}}) == make_rational(2, 5));
    CHECK(psi_mperm(m, {{1, 1}, {1, 1}}) == make_rational(2, 5));  // dedup
    CHECK(psi_mperm(m, {{1, 1}, {2, 3}}) == make_rational(2, 25));

    CHECK(psi_setpart(10, {{1, 2}}) == make_rational(1, 10));
    CHECK(psi_setpart(10, {{1, 2}, {1, 2}}) == make_rational(1, 10));
    CHECK(psi_setpart(10, {{1, 2}, {3, 4}}) == make_rational(1, 100));
}

TEST_CASE("MWST basics") {
    DenseGraph g(3);
    g.set(0, 1, make_rational(1, 2));
    g.set(1, 2, make_rational(1, 4));
    CHECK(mwst<int>(g, {0}) == 1);  // singleton
    CHECK(mwst<int>(g, {0, 1, 2}) == make_rational(1, 8));

    DenseGraph disconnected(3);
    disconnected.set(0, 1, make_rational(1, 2));
    CHECK(mwst<int>(disconnected, {0, 1, 2}) == 0);

    auto gn = build_gN(4);
    CHECK(mwst<ArcIndicator>(gn, {{1, 2}, {1, 3}, {2, 4}}) == make_rational(1, 4));
    // multiset input collapses to its support
    CHECK(mwst<ArcIndicator>(gn, {{1, 2}, {1, 2}, {1, 3}, {2, 4}}) == make_rational(1, 4));
}

TEST_CASE("MWST greedy equals exhaustive enumeration on random graphs") {
    Rng rng(314);
    for (int trial = 0; trial < 80; ++trial) {
        int k = 2 + static_cast<int>(bounded_uniform(rng, 5));  // up to 6 vertices
        DenseGraph g(k);
        std::vector<int> verts;
        for (int u = 0; u < k; ++u) verts.push_back(u);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) {
                if (bounded_uniform(rng, 4) == 0) continue;  // absent edge
                long den = 1 + static_cast<long>(bounded_uniform(rng, 16));
                long num = static_cast<long>(bounded_uniform(rng, static_cast<std::uint64_t>(den) + 1));
                g.set(u, v, make_rational(num, den));
            }
        CHECK(mwst<int>(g, verts) == oracles::mwst_exhaustive<int>(g, verts));
    }
}

TEST_CASE("MWST bounds and attachment property") {
    Rng rng(271);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 3 + static_cast<int>(bounded_uniform(rng, 3));
        DenseGraph g(k);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) {
                long den = 1 + static_cast<long>(bounded_uniform(rng, 9));
                g.set(u, v, make_rational(1, den));
            }
        std::vector<int> sub;
        for (int u = 0; u + 1 < k; ++u) sub.push_back(u);
        Rational before = mwst<int>(g, sub);
        std::vector<int> full = sub;
        full.push_back(k - 1);
        Rational after = mwst<int>(g, full);
        CHECK(after <= 1);
        Rational best_incident(0);
        for (int u = 0; u + 1 < k; ++u)
            best_incident = std::max(best_incident, g.weight(u, k - 1));
        // attaching the new vertex by its best edge is always available
        CHECK(after >= before * best_incident);
    }
}

TEST_CASE("monomial weights W(I,J)") {
    auto gn = build_gN(5);
    Monomial<ArcIndicator> a = {{1, 2}};
    CHECK(monomial_weight<ArcIndicator>(gn, a, a) == 1);  // shared element

    DenseGraph zero(4);
    CHECK(monomial_weight<int>(zero, {0, 1}, {2, 3}) == 0);  // no edges at all

    Monomial<ArcIndicator> i1 = {{1, 2}};
    Monomial<ArcIndicator> j1 = {{1, 3}, {4, 5}};
    CHECK(monomial_weight<ArcIndicator>(gn, i1, j1) == 1);  // X12-X13 share a start
}

TEST_CASE("power graph inherits weights and Psi lifts by union") {
    auto gn = build_gN(4);
    auto g2 = power_graph<ArcIndicator>(gn, 2);
    // d = 1 power is isomorphic to the base graph
    auto g1 = power_graph<ArcIndicator>(gn, 1);
    for (auto x : setpart_vertices(4))
        for (auto y : setpart_vertices(4)) {
            if (x == y) continue;
            CHECK(g1.weight({x}, {y}) == gn.weight(x, y));
        }
    // singleton monomial Psi equals base Psi
    CHECK(psi_setpart_monomials(4, {{{1, 2}}}) == psi_setpart(4, {{1, 2}}));
    CHECK(psi_setpart_monomials(4, {{{1, 2}, {3, 4}}, {{1, 3}}}) ==
          psi_setpart(4, {{1, 2}, {3, 4}, {1, 3}}));
    // the worked example: w({X12, X34}, {X13}) = 1 via the shared start
    CHECK(g2.weight({{1, 2}, {3, 4}}, {{1, 3}}) == 1);
    CHECK_THROWS_AS(power_graph<ArcIndicator>(gn, 0), std::domain_error);
}

TEST_CASE("parameter R closed forms match the family sums") {
    auto tau21 = PermPattern::parse("21");
    CHECK(param_R_mperm(Multiset::parse("1,2,3"), tau21) == 1);
    CHECK(param_R_setpart(4, ArcPattern::parse("1-2")) == make_rational(6, 4));
    CHECK(param_R_mperm(Multiset::parse("1"), tau21) == 0);  // l > n
    CHECK(param_R_setpart(3, ArcPattern::parse("1-3,2-4")) == 0);

    for (const auto& m : {Multiset::parse("1^2,2^2"), Multiset::parse("1,2,3,4"),
                          Multiset::parse("1^3,2,3")}) {
        auto fam = mperm_pattern_monomials(m, tau21);
        auto psi = [&](const std::vector<Monomial<MPermIndicator>>& bags) {
            return psi_mperm_monomials(m, bags);
        };
        CHECK(param_R_bruteforce<MPermIndicator>(fam, psi) == param_R_mperm(m, tau21));
    }
    for (int n : {4, 5, 6}) {
        for (const auto& pat : {ArcPattern::parse("1-2"), ArcPattern::parse("1-3,2-4")}) {
            auto fam = setpart_pattern_monomials(n, pat);
            auto psi = [&](const std::vector<Monomial<ArcIndicator>>& bags) {
                return psi_setpart_monomials(n, bags);
            };
            CHECK(param_R_bruteforce<ArcIndicator>(fam, psi) == param_R_setpart(n, pat));
        }
    }
}

TEST_CASE("T_h brute force on worked fixtures") {
    // single-monomial family: only the self term survives
    auto m12 = Multiset::parse("1,2");
    auto tau21 = PermPattern::parse("21");
    auto fam1 = mperm_pattern_monomials(m12, tau21);
    REQUIRE(fam1.size() == 1);
    auto gm = build_gM(m12);
    auto psi1 = [&](const std::vector<Monomial<MPermIndicator>>& bags) {
        return psi_mperm_monomials(m12, bags);
    };
    CHECK(param_Th_bruteforce<MPermIndicator>(fam1, gm, psi1, 1) == 1);

    // hand-derived: single-arc pattern on n = 4, T_1 attains 33/16 at alpha = (1,4)
    auto gn = build_gN(4);
    auto fam2 = setpart_pattern_monomials(4, ArcPattern::parse("1-2"));
    auto psi2 = [&](const std::vector<Monomial<ArcIndicator>>& bags) {
        return psi_setpart_monomials(4, bags);
    };
    CHECK(param_Th_bruteforce<ArcIndicator>(fam2, gn, psi2, 1) == make_rational(33, 16));
    CHECK_THROWS_AS(param_Th_bruteforce<ArcIndicator>(fam2, gn, psi2, 3), std::domain_error);
}

TEST_CASE("T_1 stays within a constant of e_{l-1} for words and n^{l-a-1} for partitions") {
    auto tau21 = PermPattern::parse("21");
    for (int n = 4; n <= 8; ++n) {
        auto m = balanced_multiset(n, std::min(n, 4));
        auto fam = mperm_pattern_monomials(m, tau21);
        auto g = build_gM(m);
        auto psi = [&](const std::vector<Monomial<MPermIndicator>>& bags) {
            return psi_mperm_monomials(m, bags);
        };
        Rational t1 = param_Th_bruteforce<MPermIndicator>(fam, g, psi, 1);
        // e_{l-1}(M) = e_1(M) = n for l = 2
        CHECK(t1 <= Rational(3) * Rational(m.elementary_symmetric(1)));
        CHECK(t1 > 0);
    }
    auto single = ArcPattern::parse("1-2");
    for (int n = 4; n <= 8; ++n) {
        auto fam = setpart_pattern_monomials(n, single);
        auto g = build_gN(n);
        auto psi = [&](const std::vector<Monomial<ArcIndicator>>& bags) {
            return psi_setpart_monomials(n, bags);
        };
        Rational t1 = param_Th_bruteforce<ArcIndicator>(fam, g, psi, 1);
        // l = 2, a = 1: T_1 = O(n^{l-a-1}) = O(1)
        CHECK(t1 <= Rational(4));
    }
}

TEST_CASE("variance upper bound") {
    CHECK(variance_upper_bound(Rational(1), Rational(1), Rational(1)) == 2);
    CHECK(variance_upper_bound(Rational(0), Rational(5), Rational(3)) == 0);
    CHECK_THROWS_AS(variance_upper_bound(Rational(-1), Rational(1), Rational(1)),
                    std::domain_error);

    // 2 C2_hat R T1 must dominate the exact enumerated variance
    auto m = Multiset::parse("1,2,3");
    auto tau = PermPattern::parse("21");
    auto mv = oracles::occ_moments_mperm(m, tau);
    CHECK(mv.variance == make_rational(11, 12));

    auto g = build_gM(m);
    MPermExactMoments oracle(m);
    auto psi_bag = [&](const MPermBag& bag) { return psi_mperm(m, bag); };
    auto rep = estimate_Cr(mperm_vertices(m), g, psi_bag, oracle, 2);
    auto fam = mperm_pattern_monomials(m, tau);
    auto psi_mono = [&](const std::vector<Monomial<MPermIndicator>>& bags) {
        return psi_mperm_monomials(m, bags);
    };
    Rational t1 = param_Th_bruteforce<MPermIndicator>(fam, g, psi_mono, 1);
    Rational bound = variance_upper_bound(param_R_mperm(m, tau), t1, rep.max_ratio);
    CHECK(bound >= mv.variance);
}

TEST_CASE("parameter reports bundle R, T_h, Q and the variance bound") {
    auto m = Multiset::parse("1,2,3");
    auto tau = PermPattern::parse("21");
    auto rep = param_report_mperm(m, tau, Rational(2));
    CHECK(rep.R == 1);
    CHECK(rep.T.at(1) > 0);
    CHECK(rep.Q == Rational(3));  // e_1(M) = n
    CHECK(rep.variance_upper == Rational(4) * rep.T.at(1));

    auto reps = param_report_setpart(4, ArcPattern::parse("1-2"), Rational(1));
    CHECK(reps.R == make_rational(6, 4));
    CHECK(reps.T.at(1) == make_rational(33, 16));
    CHECK(reps.Q == 1);  // n^{l-a-1} = n^0
    CHECK(reps.variance_upper == Rational(2) * reps.R * reps.T.at(1));
}

TEST_CASE("C_r scan on the smallest multiset") {
    auto m = Multiset::parse("1,2");
    auto g = build_gM(m);
    MPermExactMoments oracle(m);
    auto psi = [&](const MPermBag& bag) { return psi_mperm(m, bag); };
    auto rep = estimate_Cr(mperm_vertices(m), g, psi, oracle, 2);
    CHECK(rep.violations.empty());
    // scan maximum over A^{1,2} pairs: mixed pair {X_1^1, X_2^2} attains 2
    CHECK(rep.max_ratio == 2);
    // the spec's worked bag {X_1^1, X_2^1} itself has ratio 1
    Rational kappa = joint_cumulant<MPermIndicator>(oracle, {{1, 1}, {2, 1}});
    Rational ratio = abs(kappa) / (psi({{1, 1}, {2, 1}}) * mwst<MPermIndicator>(g, {{1, 1}, {2, 1}}));
    CHECK(ratio == 1);
}

TEST_CASE("C_r scans stay clean on set partitions") {
    SetPartEnumMoments oracle(5);
    auto g = build_gN(5);
    auto psi = [&](const ArcBag& bag) { return psi_setpart(5, bag); };
    auto rep2 = estimate_Cr(setpart_vertices(5), g, psi, oracle, 2);
    CHECK(rep2.violations.empty());
    CHECK(rep2.max_ratio > 0);
    auto rep3 = estimate_Cr(setpart_vertices(5), g, psi, oracle, 3);
    CHECK(rep3.violations.empty());
    CHECK(rep3.bags_scanned == 120);  // C(10, 3)
}
