#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "multiset.hpp"
#include "murn.hpp"
#include "patterns.hpp"
#include "samplers.hpp"
#include "set_partition.hpp"
#include "stats.hpp"

namespace patternlab {

struct McRun {
    std::string family;      // "mperm" or "setpart"
    std::string pattern;     // tau or arc-pattern text
    std::string size_descr;  // multiset text or n
    long reps = 0;
    std::uint64_t seed = 0;
    std::vector<double> samples;       // per-replica pattern counts, replica order
    double mean = 0.0;
    double variance = 0.0;             // unbiased
    std::vector<double> standardized;  // (x - mean)/sd
};

namespace detail {

// Replica-parallel map with a deterministic merge: replica k always uses
// seed derive_seed(master, k), whatever the thread layout.
template <class PerReplica>
std::vector<double> replica_map(long reps, std::uint64_t master_seed, int threads,
                                PerReplica&& per_replica) {
    std::vector<double> out(static_cast<std::size_t>(reps), 0.0);
    threads = std::max(1, threads);
    if (threads == 1) {
        for (long k = 0; k < reps; ++k)
            out[static_cast<std::size_t>(k)] = per_replica(derive_seed(master_seed, static_cast<std::uint64_t>(k)));
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (long k = t; k < reps; k += threads)
                out[static_cast<std::size_t>(k)] =
                    per_replica(derive_seed(master_seed, static_cast<std::uint64_t>(k)));
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

inline void finalize_run(McRun& run) {
    const double n = static_cast<double>(run.samples.size());
    double mean = 0.0;
    for (double x : run.samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : run.samples) ss += (x - mean) * (x - mean);
    run.mean = mean;
    run.variance = ss / (n - 1.0);
    double sd = std::sqrt(run.variance);
    run.standardized.reserve(run.samples.size());
    for (double x : run.samples) run.standardized.push_back(sd > 0.0 ? (x - mean) / sd : 0.0);
}

inline void check_count_range(long n, int ell) {
    // the fast counting path accumulates in long long
    if (binomial(n, ell) > BigInt("4611686018427387904"))
        throw size_limit_error("run_mc: counts may overflow the fast path; reduce n or l");
}

}  // namespace detail

inline McRun run_mc_mperm(const Multiset& m, const PermPattern& tau, long reps,
                          std::uint64_t seed, int threads = 1) {
    if (reps < 2) throw std::domain_error("run_mc: need reps >= 2");
    detail::check_count_range(m.size(), tau.size());
    McRun run;
    run.family = "mperm";
    run.pattern = tau.str();
    run.size_descr = m.str();
    run.reps = reps;
    run.seed = seed;
    run.samples = detail::replica_map(reps, seed, threads, [&](std::uint64_t rs) {
        Rng rng(rs);
        Word w = sample_multiset_perm(m, rng);
        return static_cast<double>(count_perm_pattern_as<long long>(w, tau));
    });
    detail::finalize_run(run);
    return run;
}

inline McRun run_mc_setpart(int n, const ArcPattern& pat, long reps, std::uint64_t seed,
                            int threads = 1, double tail_tol = 1e-12) {
    if (reps < 2) throw std::domain_error("run_mc: need reps >= 2");
    detail::check_count_range(n, pat.length());
    MUrnLaw law(n, tail_tol);
    McRun run;
    run.family = "setpart";
    run.pattern = pat.str();
    run.size_descr = std::to_string(n);
    run.reps = reps;
    run.seed = seed;
    run.samples = detail::replica_map(reps, seed, threads, [&](std::uint64_t rs) {
        Rng rng(rs);
        StamDraw d = sample_stam(n, law, rng);
        return static_cast<double>(count_arc_pattern_as<long long>(d.partition, pat));
    });
    detail::finalize_run(run);
    return run;
}

// Diagnostics of a finished run.
inline double mc_ks(const McRun& run) { return ks_distance(run.standardized); }

inline std::vector<double> empirical_cumulants(const std::vector<double>& sample, int max_order) {
    return k_statistics(sample, max_order);
}

}  // namespace patternlab
