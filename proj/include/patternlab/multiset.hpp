#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace patternlab {

// A word over positive-integer letters; its letter multiset is implicit.
using Word = std::vector<int>;

// Finite multiset M = {1^{a_1}, 2^{a_2}, ...}. Value labels are normalized to
// 1..k on ingestion (pattern semantics only see relative order).
class Multiset {
  public:
    Multiset() = default;

    // counts[j] is the multiplicity of letter j+1; all counts must be >= 1.
    explicit Multiset(std::vector<long> counts) : mult_(std::move(counts)) {
        for (long c : mult_)
            if (c < 1) throw std::domain_error("multiset multiplicities must be >= 1");
        n_ = std::accumulate(mult_.begin(), mult_.end(), 0L);
    }

    static Multiset from_value_counts(const std::map<int, long>& value_counts) {
        std::vector<long> counts;
        counts.reserve(value_counts.size());
        for (const auto& [v, c] : value_counts) {
            if (v <= 0) throw std::domain_error("multiset values must be positive");
            counts.push_back(c);
        }
        return Multiset(std::move(counts));
    }

    static Multiset from_word(const Word& w) {
        std::map<int, long> vc;
        for (int x : w) ++vc[x];
        return from_value_counts(vc);
    }

    // Text format: "1^2,2^2,3" (value^count, ^1 optional).
    static Multiset parse(const std::string& text) {
        std::map<int, long> vc;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw parse_error("empty item in multiset: '" + text + "'");
            long value = 0, count = 1;
            auto caret = item.find('^');
            try {
                value = std::stol(item.substr(0, caret));
                if (caret != std::string::npos) count = std::stol(item.substr(caret + 1));
            } catch (const std::exception&) {
                throw parse_error("bad multiset item: '" + item + "'");
            }
            if (value <= 0 || count <= 0) throw parse_error("bad multiset item: '" + item + "'");
            vc[static_cast<int>(value)] += count;
        }
        if (vc.empty()) throw parse_error("empty multiset: '" + text + "'");
        return from_value_counts(vc);
    }

    std::string str() const {
        std::string out;
        for (std::size_t j = 0; j < mult_.size(); ++j) {
            if (j) out += ',';
            out += std::to_string(j + 1);
            if (mult_[j] > 1) out += '^' + std::to_string(mult_[j]);
        }
        return out;
    }

    long size() const { return n_; }
    int distinct() const { return static_cast<int>(mult_.size()); }
    long multiplicity(int value) const {
        if (value < 1 || value > distinct()) return 0;
        return mult_[value - 1];
    }
    const std::vector<long>& multiplicities() const { return mult_; }

    // The sorted word 11..122..2...; lexicographic minimum of S_M.
    Word sorted_word() const {
        Word w;
        w.reserve(n_);
        for (int j = 1; j <= distinct(); ++j) w.insert(w.end(), mult_[j - 1], j);
        return w;
    }

    // |S_M| = n! / (a_1! a_2! ...)
    BigInt permutation_count() const {
        BigInt r = factorial(static_cast<unsigned>(n_));
        for (long a : mult_) r /= factorial(static_cast<unsigned>(a));
        return r;
    }

    // Nonincreasing reordering b_1 >= b_2 >= ... of the multiplicities.
    std::vector<long> sorted_multiplicities_desc() const {
        std::vector<long> b = mult_;
        std::sort(b.rbegin(), b.rend());
        return b;
    }

    // n_(j) = n - b_1 - ... - b_j, clamped at 0 past the distinct-value count.
    long residual_size(int j) const {
        if (j < 0) throw std::domain_error("residual_size: j must be >= 0");
        auto b = sorted_multiplicities_desc();
        long r = n_;
        for (int t = 0; t < j && t < static_cast<int>(b.size()); ++t) r -= b[t];
        return r;
    }

    // e_d(M), the d-th elementary symmetric function of the multiplicities.
    BigInt elementary_symmetric(int d) const {
        if (d < 0) throw std::domain_error("elementary_symmetric: d must be >= 0");
        // e[t] after processing a prefix of multiplicities
        std::vector<BigInt> e(static_cast<std::size_t>(d) + 1, BigInt(0));
        e[0] = 1;
        for (long a : mult_)
            for (int t = std::min<int>(d, distinct()); t >= 1; --t) e[t] += BigInt(a) * e[t - 1];
        return e[d];
    }

    // (b_1 + ... + b_l)/n; a sequence is l-regular iff this stays <= K < 1.
    Rational regularity_ratio(int ell) const {
        if (ell < 1) throw std::domain_error("regularity_ratio: l must be >= 1");
        auto b = sorted_multiplicities_desc();
        long top = 0;
        for (int t = 0; t < ell && t < static_cast<int>(b.size()); ++t) top += b[t];
        return make_rational(top, n_);
    }

    bool operator==(const Multiset& o) const { return mult_ == o.mult_; }

  private:
    std::vector<long> mult_;
    long n_ = 0;
};

// Balanced k-letter multiset of total size n (first n mod k letters get the
// extra copy). The MC fixtures use these.
inline Multiset balanced_multiset(long n, int k) {
    if (k < 1 || n < k) throw std::domain_error("balanced_multiset: need n >= k >= 1");
    std::vector<long> counts(static_cast<std::size_t>(k), n / k);
    for (long j = 0; j < n % k; ++j) ++counts[static_cast<std::size_t>(j)];
    return Multiset(std::move(counts));
}

inline std::string word_str(const Word& w) {
    bool digits = std::all_of(w.begin(), w.end(), [](int x) { return x >= 1 && x <= 9; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!digits && i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

inline Word parse_word(const std::string& text) {
    Word w;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                w.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw parse_error("bad word item: '" + item + "'");
            }
        }
    } else {
        for (char c : text) {
            if (c < '1' || c > '9') throw parse_error("bad word: '" + text + "'");
            w.push_back(c - '0');
        }
    }
    if (w.empty()) throw parse_error("empty word");
    for (int x : w)
        if (x <= 0) throw parse_error("word letters must be positive");
    return w;
}

}  // namespace patternlab
