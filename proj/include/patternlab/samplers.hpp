#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "multiset.hpp"
#include "murn.hpp"
#include "set_partition.hpp"

namespace patternlab {

// Seed protocol: replica seeds come from the master seed through the
// splitmix64 finalizer (fixed constants below), so parallel replicas are
// reproducible regardless of thread layout.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replica) {
    return mix64(master ^ mix64(replica));
}

using Rng = std::mt19937_64;

// Unbiased bounded draw (Lemire's multiply-reject); avoids the
// implementation-defined std::uniform_int_distribution.
inline std::uint64_t bounded_uniform(Rng& rng, std::uint64_t bound) {
    while (true) {
        std::uint64_t x = rng();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (-bound) % bound;
            if (low < threshold) continue;
        }
        return static_cast<std::uint64_t>(m >> 64);
    }
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform element of S_M: sorted word + Fisher-Yates.
inline Word sample_multiset_perm(const Multiset& m, Rng& rng) {
    Word w = m.sorted_word();
    for (std::size_t i = w.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded_uniform(rng, i));
        std::swap(w[i - 1], w[j]);
    }
    return w;
}

inline Word sample_multiset_perm(const Multiset& m, std::uint64_t seed) {
    Rng rng(seed);
    return sample_multiset_perm(m, rng);
}

struct StamDraw {
    SetPartition partition;
    long urn_count = 0;   // M
    int empty_urns = 0;   // M - occupied urns
    std::vector<int> urn_assignment;  // per ball, 0-based urn index
};

// Stam's urn model: draw M from the law, drop each ball uniformly.
inline StamDraw sample_stam(int n, const MUrnLaw& law, Rng& rng) {
    if (law.n() != n) throw std::domain_error("sample_stam: law built for different n");
    StamDraw d;
    d.urn_count = law.sample_from_uniform(uniform01(rng));
    d.urn_assignment.resize(static_cast<std::size_t>(n));
    std::vector<char> occupied(static_cast<std::size_t>(d.urn_count), 0);
    for (int i = 0; i < n; ++i) {
        int urn = static_cast<int>(bounded_uniform(rng, static_cast<std::uint64_t>(d.urn_count)));
        d.urn_assignment[static_cast<std::size_t>(i)] = urn;
        occupied[static_cast<std::size_t>(urn)] = 1;
    }
    int occ = 0;
    for (char c : occupied) occ += c;
    d.empty_urns = static_cast<int>(d.urn_count) - occ;
    d.partition = SetPartition::from_labels(d.urn_assignment);
    return d;
}

inline StamDraw sample_stam(int n, const MUrnLaw& law, std::uint64_t seed) {
    Rng rng(seed);
    return sample_stam(n, law, rng);
}

}  // namespace patternlab
