// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "patternlab/cond.hpp"
#include "patternlab/enumeration.hpp"
#include "patternlab/mc.hpp"
#include "patternlab/moments.hpp"
#include "patternlab/multiset.hpp"
#include "patternlab/murn.hpp"
#include "patternlab/patterns.hpp"
#include "patternlab/samplers.hpp"
#include "patternlab/set_partition.hpp"
#include "patternlab/stats.hpp"
#include "patternlab/wdg.hpp"
#include "support/oracles.hpp"

using namespace patternlab;

namespace {

constexpr std::uint64_t kSuiteSeed = 7;
const int kThreads = 2;

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

// ---------------------------------------------------------------------------
// 1. Closed-form vs brute-force moments, |M| <= 7, distinct positions, |C| <= 3
// ---------------------------------------------------------------------------
bool criterion_moment_equivalence(std::string& detail) {
    long cases = 0;
    for (int n = 1; n <= 7; ++n) {
        for (const auto& m : oracles::all_multisets_of_size(n)) {
            std::vector<Word> words;
            for_each_multiset_perm(m, [&](const Word& w) { words.push_back(w); });
            const BigInt total(static_cast<long>(words.size()));
            const int k = m.distinct();

            std::vector<MPermBag> bags;
            std::vector<int> pos;
            auto emit_values = [&](auto&& self, std::size_t slot, MPermBag& bag) -> void {
                if (slot == pos.size()) {
                    bags.push_back(bag);
                    return;
                }
                for (int j = 1; j <= k; ++j) {
                    bag.push_back({pos[slot], j});
                    self(self, slot + 1, bag);
                    bag.pop_back();
                }
            };
            auto emit_positions = [&](auto&& self, int next, int remaining) -> void {
                if (remaining == 0) {
                    MPermBag bag;
                    emit_values(emit_values, 0, bag);
                    return;
                }
                for (int p = next; p <= n; ++p) {
                    pos.push_back(p);
                    self(self, p + 1, remaining - 1);
                    pos.pop_back();
                }
            };
            for (int size = 1; size <= 3 && size <= n; ++size)
                emit_positions(emit_positions, 1, size);

            for (const auto& bag : bags) {
                long hits = 0;
                for (const auto& w : words) {
                    bool ok = true;
                    for (const auto& x : bag)
                        if (w[static_cast<std::size_t>(x.pos - 1)] != x.value) {
                            ok = false;
                            break;
                        }
                    if (ok) ++hits;
                }
                Rational brute = make_rational(BigInt(hits), total);
                if (joint_moment_mperm_closed(m, bag) != brute) {
                    detail = "mismatch at M=" + m.str();
                    return false;
                }
                ++cases;
            }
        }
    }
    detail = std::to_string(cases) + " indicator sets, exact equality";
    return true;
}

// ---------------------------------------------------------------------------
// 2. WDG bound scan over multisets
// ---------------------------------------------------------------------------
bool criterion_wdg_mperm(std::string& detail) {
    std::map<int, std::map<int, Rational>> table;  // r -> n -> max ratio
    long violations = 0;
    for (int n = 2; n <= 7; ++n) {
        for (const auto& m : oracles::all_multisets_of_size(n)) {
            auto g = build_gM(m);
            MPermExactMoments oracle(m);
            auto psi = [&](const MPermBag& bag) { return psi_mperm(m, bag); };
            auto verts = mperm_vertices(m);
            for (int r = 2; r <= 3; ++r) {
                auto rep = estimate_Cr(verts, g, psi, oracle, r);
                violations += static_cast<long>(rep.violations.size());
                auto& slot = table[r][n];
                if (rep.max_ratio > slot) slot = rep.max_ratio;
            }
        }
    }
    std::ostringstream msg;
    bool trend_ok = true;
    for (int r = 2; r <= 3; ++r) {
        msg << " r=" << r << ":";
        for (int n = 4; n <= 7; ++n) msg << " " << to_double(table[r][n]);
        for (int n = 4; n <= 6; ++n) {
            // no upward trend: at most +10% per step
            if (table[r][n + 1] > table[r][n] * make_rational(11, 10)) trend_ok = false;
        }
    }
    detail = "violations=" + std::to_string(violations) + ", Chat table:" + msg.str();
    return violations == 0 && trend_ok;
}

// ---------------------------------------------------------------------------
// 3. WDG bound scan over set partitions
// ---------------------------------------------------------------------------
bool criterion_wdg_setpart(std::string& detail) {
    std::map<int, std::map<int, double>> table;
    long violations = 0;
    for (int n = 4; n <= 8; ++n) {
        SetPartEnumMoments oracle(n);
        auto g = build_gN(n);
        auto psi = [&](const ArcBag& bag) { return psi_setpart(n, bag); };
        auto verts = setpart_vertices(n);
        for (int r = 2; r <= 3; ++r) {
            auto rep = estimate_Cr(verts, g, psi, oracle, r);
            violations += static_cast<long>(rep.violations.size());
            table[r][n] = to_double(rep.max_ratio);
        }
    }
    const double allowed = std::pow(std::log(8.0) / std::log(4.0), 6.0);
    bool growth_ok = true;
    std::ostringstream msg;
    for (int r = 2; r <= 3; ++r) {
        double ratio = table[r][8] / table[r][4];
        double c = std::log(ratio) / std::log(std::log(8.0) / std::log(4.0));
        msg << " r=" << r << ": C(4..8)=";
        for (int n = 4; n <= 8; ++n) msg << table[r][n] << (n < 8 ? "," : "");
        msg << " growth=" << ratio << " (c=" << c << ")";
        if (!(ratio <= allowed)) growth_ok = false;
    }
    detail = "violations=" + std::to_string(violations) + msg.str();
    return violations == 0 && growth_ok;
}

// ---------------------------------------------------------------------------
// 4. Stam sampler: uniformity, Poisson(1) empty urns, independence
// ---------------------------------------------------------------------------
bool criterion_stam(std::string& detail) {
    std::ostringstream msg;
    bool ok = true;
    const long reps = 200000;
    for (int n : {3, 4, 5}) {
        MUrnLaw law(n, 1e-12);
        std::vector<SetPartition> support;
        for_each_set_partition(n, [&](const SetPartition& p) { support.push_back(p); });
        std::map<std::string, long> counts;
        double esum = 0.0, esq = 0.0;
        std::map<std::pair<int, int>, long> joint;
        Rng rng(derive_seed(kSuiteSeed, static_cast<std::uint64_t>(n)));
        for (long k = 0; k < reps; ++k) {
            auto d = sample_stam(n, law, rng);
            ++counts[d.partition.str()];
            esum += d.empty_urns;
            esq += static_cast<double>(d.empty_urns) * d.empty_urns;
            ++joint[{std::min(d.empty_urns, 3), d.partition.block_count()}];
        }
        std::vector<double> obs, expd;
        for (const auto& p : support) {
            obs.push_back(static_cast<double>(counts[p.str()]));
            expd.push_back(static_cast<double>(reps) / static_cast<double>(support.size()));
        }
        double p_unif =
            chi_square_pvalue(chi_square_stat(obs, expd), static_cast<int>(support.size()) - 1);
        double mean = esum / reps;
        double var = esq / reps - mean * mean;
        bool mean_ok = std::abs(mean - 1.0) < 3.0 * std::sqrt(1.0 / static_cast<double>(reps));
        bool var_ok = std::abs(var - 1.0) < 3.0 * std::sqrt(3.0 / static_cast<double>(reps));
        std::vector<std::vector<double>> tbl(4, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (const auto& [key, c] : joint)
            tbl[static_cast<std::size_t>(key.first)][static_cast<std::size_t>(key.second - 1)] +=
                static_cast<double>(c);
        double p_ind = chi_square_independence_pvalue(tbl);
        msg << " n=" << n << ": p_unif=" << p_unif << " mean=" << mean << " var=" << var
            << " p_ind=" << p_ind << ";";
        ok = ok && p_unif > 1e-3 && mean_ok && var_ok && p_ind > 1e-3;
    }
    detail = msg.str();
    return ok;
}

// ---------------------------------------------------------------------------
// 5. Dobinski normalization and Bell-ratio moments
// ---------------------------------------------------------------------------
bool criterion_dobinski(std::string& detail) {
    double worst = 0.0;
    for (int n = 1; n <= 25; ++n) {
        MUrnLaw law(n, 1e-12);
        if (!(law.total_weight() <= 1.0 && law.total_weight() >= 1.0 - 1e-12)) {
            detail = "normalization failed at n=" + std::to_string(n);
            return false;
        }
        for (int r = 1; r <= 3; ++r) {
            double value = static_cast<double>(law.truncated_moment(r));
            double ref = to_double(make_rational(bell_number(n + r), bell_number(n)));
            worst = std::max(worst, std::abs(value - ref) / ref);
        }
    }
    std::ostringstream msg;
    msg << "max relative error " << worst << " over n<=25, r<=3";
    detail = msg.str();
    return worst < 1e-9;
}

// ---------------------------------------------------------------------------
// 6. Law of total cumulance
// ---------------------------------------------------------------------------
bool criterion_total_cumulance(std::string& detail) {
    std::vector<ArcBag> bags = {{{1, 2}}, {{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}};
    std::ostringstream msg;
    bool ok = true;
    for (int n : {4, 5})
        for (const auto& bag : bags) {
            auto rep = total_cumulance_check(n, bag, 1e-15);
            msg << " n=" << n << " |B|=" << bag.size() << " disc=" << rep.discrepancy << ";";
            ok = ok && rep.pass && rep.discrepancy < 1e-9;
        }
    detail = msg.str();
    return ok;
}

// ---------------------------------------------------------------------------
// 7. Conditional-expectation cross-check and tower property
// ---------------------------------------------------------------------------
bool criterion_cond_exp(std::string& detail) {
    long checked = 0;
    for (int l = 1; l <= 4; ++l) {
        std::vector<ArcPattern> pats;
        for_each_set_partition(l, [&](const SetPartition& p) { pats.emplace_back(p.arcs(), l); });
        for (const auto& pat : pats) {
            OverlapProfile prof(pat);
            for (int n = l; n <= 14; ++n)
                for (long m = 2; m <= 10; ++m) {
                    if (m < prof.max_overlap(pat)) continue;
                    if (cond_expectation_direct(n, m, pat) != cond_expectation_resummed(n, m, pat)) {
                        detail = "path mismatch at l=" + std::to_string(l);
                        return false;
                    }
                    ++checked;
                }
        }
    }
    // tower property vs exact enumeration
    double worst = 0.0;
    const double tail = 1e-12;
    std::vector<ArcPattern> tower_pats = {ArcPattern::parse("1-2"), ArcPattern::parse("1-3"),
                                          ArcPattern::parse("1-2,2-3"),
                                          ArcPattern::parse("1-3,2-4")};
    for (int n : {8, 10}) {
        MUrnLaw law(n, tail);
        for (const auto& pat : tower_pats) {
            long double avg =
                law.expect([&](long m) { return to_double(cond_expectation_exact(n, m, pat)); });
            double ref = to_double(oracles::occ_moments_setpart(n, pat).mean);
            worst = std::max(worst, std::abs(static_cast<double>(avg) - ref) / ref);
        }
    }
    std::ostringstream msg;
    msg << checked << " (n,m,pattern) identities exact; tower max rel err " << worst;
    detail = msg.str();
    return worst < 1e-8;
}

// ---------------------------------------------------------------------------
// 8. Variance scaling for inversions on balanced two-letter multisets
// ---------------------------------------------------------------------------
bool criterion_variance_scaling_mperm(std::string& detail) {
    auto tau = PermPattern::parse("21");
    std::vector<double> sizes, variances;
    for (long n : {64L, 128L, 256L, 512L}) {
        auto run = run_mc_mperm(balanced_multiset(n, 2), tau, 10000,
                                derive_seed(kSuiteSeed, static_cast<std::uint64_t>(n)), kThreads);
        sizes.push_back(static_cast<double>(n));
        variances.push_back(run.variance);
    }
    double slope = variance_scaling_slope(sizes, variances);
    std::ostringstream msg;
    msg << "slope=" << slope << " (want 3 +- 0.15)";
    detail = msg.str();
    return std::abs(slope - 3.0) <= 0.15;
}

// ---------------------------------------------------------------------------
// 9. Variance scaling on the set-partition side (crossing pattern)
// ---------------------------------------------------------------------------
bool criterion_variance_scaling_setpart(std::string& detail) {
    auto crossing = ArcPattern::parse("1-3,2-4");
    std::vector<double> sizes, condvars, totalvars;
    for (long n : {40L, 80L, 160L}) {
        sizes.push_back(static_cast<double>(n));
        condvars.push_back(var_cond_expectation(static_cast<int>(n), crossing, 1e-12));
        auto run = run_mc_setpart(static_cast<int>(n), crossing, 10000,
                                  derive_seed(kSuiteSeed, 1000 + static_cast<std::uint64_t>(n)),
                                  kThreads);
        totalvars.push_back(run.variance);
    }
    double cond_slope = variance_scaling_slope(sizes, condvars);
    double total_slope = variance_scaling_slope(sizes, totalvars);
    std::ostringstream msg;
    msg << "var_cond_expectation slope=" << cond_slope << ", MC total-variance slope="
        << total_slope << " (want 3 +- 0.5 each)";
    detail = msg.str();
    return std::abs(cond_slope - 3.0) <= 0.5 && std::abs(total_slope - 3.0) <= 0.5;
}

// ---------------------------------------------------------------------------
// 10. CLT trend: KS decreasing (<= 1 inversion) and final KS < 0.05
// ---------------------------------------------------------------------------
bool criterion_clt_trend(std::string& detail) {
    struct Case {
        std::string name;
        std::function<McRun(long, std::uint64_t)> run;
    };
    std::vector<Case> cases;
    cases.push_back({"mperm 21 (2 letters)", [](long n, std::uint64_t seed) {
                         return run_mc_mperm(balanced_multiset(n, 2), PermPattern::parse("21"),
                                             10000, seed, kThreads);
                     }});
    cases.push_back({"mperm 231 (4 letters)", [](long n, std::uint64_t seed) {
                         return run_mc_mperm(balanced_multiset(n, 4), PermPattern::parse("231"),
                                             10000, seed, kThreads);
                     }});
    cases.push_back({"setpart 1-2", [](long n, std::uint64_t seed) {
                         return run_mc_setpart(static_cast<int>(n), ArcPattern::parse("1-2"),
                                               10000, seed, kThreads);
                     }});
    cases.push_back({"setpart crossing", [](long n, std::uint64_t seed) {
                         return run_mc_setpart(static_cast<int>(n), ArcPattern::parse("1-3,2-4"),
                                               10000, seed, kThreads);
                     }});
    const std::vector<long> sizes = {50, 100, 200, 400};
    bool ok = true;
    std::ostringstream msg;
    std::uint64_t case_tag = 0;
    for (const auto& c : cases) {
        std::vector<double> ks;
        for (long n : sizes)
            ks.push_back(mc_ks(c.run(
                n, derive_seed(kSuiteSeed, (++case_tag) * 10000 + static_cast<std::uint64_t>(n)))));
        int inversions = 0;
        for (std::size_t i = 0; i + 1 < ks.size(); ++i)
            if (ks[i + 1] > ks[i]) ++inversions;
        bool final_ok = ks.back() < 0.05;
        bool trend_ok = inversions <= 1;
        msg << " [" << c.name << ": ks=";
        for (double k : ks) msg << k << " ";
        msg << "inversions=" << inversions << (final_ok ? "" : " FINAL>0.05")
            << (trend_ok ? "" : " TREND") << "]";
        ok = ok && final_ok && trend_ok;
    }
    detail = msg.str();
    return ok;
}

// ---------------------------------------------------------------------------
// 11. MWST greedy vs exhaustive enumeration
// ---------------------------------------------------------------------------
bool criterion_mwst_oracle(std::string& detail) {
    Rng rng(derive_seed(kSuiteSeed, 777));
    for (int trial = 0; trial < 200; ++trial) {
        int k = 2 + static_cast<int>(bounded_uniform(rng, 5));
        DenseGraph g(k);
        std::vector<int> verts;
        for (int u = 0; u < k; ++u) verts.push_back(u);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) {
                if (bounded_uniform(rng, 5) == 0) continue;
                long den = 1 + static_cast<long>(bounded_uniform(rng, 12));
                long num = static_cast<long>(bounded_uniform(rng, static_cast<std::uint64_t>(den) + 1));
                g.set(u, v, make_rational(num, den));
            }
        if (mwst<int>(g, verts) != oracles::mwst_exhaustive<int>(g, verts)) {
            detail = "greedy != exhaustive at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "200 random graphs, exact agreement";
    return true;
}

// ---------------------------------------------------------------------------
// 12. Elementary-symmetric sandwich bound
// ---------------------------------------------------------------------------
bool criterion_ed_sandwich(std::string& detail) {
    Rng rng(derive_seed(kSuiteSeed, 888));
    for (int trial = 0; trial < 500; ++trial) {
        int n = 2 + static_cast<int>(bounded_uniform(rng, 29));
        auto m = oracles::random_multiset(n, rng);
        for (int d = 1; d <= 4; ++d) {
            BigInt ed = m.elementary_symmetric(d);
            BigInt upper(1);
            for (int j = 0; j < d; ++j) upper *= BigInt(m.residual_size(j));
            if (!(ed <= upper && factorial(static_cast<unsigned>(d)) * ed >= upper)) {
                detail = "bound failed for M=" + m.str() + " d=" + std::to_string(d);
                return false;
            }
        }
    }
    detail = "500 random multisets, |M| <= 30, d <= 4";
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"01 exact moment oracle equivalence", criterion_moment_equivalence},
        {"02 wdg bound scan (multisets)", criterion_wdg_mperm},
        {"03 wdg bound scan (set partitions)", criterion_wdg_setpart},
        {"04 stam sampler uniformity/Poisson/independence", criterion_stam},
        {"05 Dobinski and Bell-ratio identities", criterion_dobinski},
        {"06 law of total cumulance", criterion_total_cumulance},
        {"07 conditional expectation cross-check + tower", criterion_cond_exp},
        {"08 variance scaling (inversions, two letters)", criterion_variance_scaling_mperm},
        {"09 variance scaling (set partitions, crossing)", criterion_variance_scaling_setpart},
        {"10 CLT trend (KS decreasing, final < 0.05)", criterion_clt_trend},
        {"11 MWST greedy vs exhaustive", criterion_mwst_oracle},
        {"12 elementary-symmetric sandwich", criterion_ed_sandwich},
    };

    int failed = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s  [%.1fs]  %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    if (failed > 0) std::printf("%d criterion(s) failed\n", failed);
    return failed;
}
