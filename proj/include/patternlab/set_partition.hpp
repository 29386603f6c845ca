#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "multiset.hpp"

namespace patternlab {

using Arc = std::pair<int, int>;

// Set partition of [n]; blocks are kept sorted internally and ordered by
// their minima, so equal partitions compare equal.
class SetPartition {
  public:
    SetPartition() = default;

    explicit SetPartition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
        for (auto& b : blocks_) {
            if (b.empty()) throw std::domain_error("empty block");
            std::sort(b.begin(), b.end());
        }
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        std::set<int> seen;
        int maxel = 0;
        for (const auto& b : blocks_)
            for (int x : b) {
                if (x < 1) throw std::domain_error("elements must be >= 1");
                if (!seen.insert(x).second) throw std::domain_error("blocks not disjoint");
                maxel = std::max(maxel, x);
            }
        n_ = maxel;
        if (static_cast<int>(seen.size()) != n_)
            throw std::domain_error("blocks must cover [n] without gaps");
    }

    // Restricted growth string: rgs[i] is the block label of element i+1,
    // labels appear in first-use order starting at 0.
    static SetPartition from_rgs(const std::vector<int>& rgs) {
        int k = 0;
        for (int label : rgs) k = std::max(k, label + 1);
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < rgs.size(); ++i)
            blocks[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i + 1));
        return SetPartition(std::move(blocks));
    }

    // Equivalence classes of an arbitrary per-element label sequence.
    static SetPartition from_labels(const std::vector<int>& labels) {
        std::map<int, std::vector<int>> by;
        for (std::size_t i = 0; i < labels.size(); ++i)
            by[labels[i]].push_back(static_cast<int>(i + 1));
        std::vector<std::vector<int>> blocks;
        blocks.reserve(by.size());
        for (auto& [lab, blk] : by) blocks.push_back(std::move(blk));
        return SetPartition(std::move(blocks));
    }

    // Text format: "{1,3,4}{2,5}".
    static SetPartition parse(const std::string& text) {
        std::vector<std::vector<int>> blocks;
        std::size_t i = 0;
        while (i < text.size()) {
            if (text[i] != '{') throw parse_error("expected '{' in partition: '" + text + "'");
            auto close = text.find('}', i);
            if (close == std::string::npos) throw parse_error("unbalanced '{' in partition");
            std::vector<int> block;
            std::stringstream ss(text.substr(i + 1, close - i - 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    block.push_back(std::stoi(item));
                } catch (const std::exception&) {
                    throw parse_error("bad element '" + item + "' in partition");
                }
            }
            if (block.empty()) throw parse_error("empty block in partition: '" + text + "'");
            blocks.push_back(std::move(block));
            i = close + 1;
        }
        if (blocks.empty()) throw parse_error("empty partition: '" + text + "'");
        try {
            return SetPartition(std::move(blocks));
        } catch (const std::domain_error& e) {
            throw parse_error(std::string("invalid partition: ") + e.what());
        }
    }

    std::string str() const {
        std::string out;
        for (const auto& b : blocks_) {
            out += '{';
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(b[i]);
            }
            out += '}';
        }
        return out;
    }

    int n() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    // Arc representation: consecutive in-block elements, sorted by start.
    // Starts are distinct and ends are distinct by construction.
    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        for (const auto& b : blocks_)
            for (std::size_t i = 0; i + 1 < b.size(); ++i) out.emplace_back(b[i], b[i + 1]);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Inverse of arcs(): rebuild the blocks of [n] joined by the given arcs.
    static SetPartition from_arcs(int n, const std::vector<Arc>& arcs) {
        std::vector<int> parent(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) parent[static_cast<std::size_t>(i)] = i;
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        for (const auto& [i, j] : arcs) {
            if (i < 1 || j > n || i >= j) throw std::domain_error("bad arc");
            parent[static_cast<std::size_t>(find(i))] = find(j);
        }
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (int x = 1; x <= n; ++x) labels[static_cast<std::size_t>(x - 1)] = find(x);
        return from_labels(labels);
    }

    std::vector<int> rgs() const {
        std::vector<int> out(static_cast<std::size_t>(n_));
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            for (int x : blocks_[b]) out[static_cast<std::size_t>(x - 1)] = static_cast<int>(b);
        return out;
    }

    bool operator==(const SetPartition& o) const { return blocks_ == o.blocks_; }
    bool operator<(const SetPartition& o) const { return blocks_ < o.blocks_; }

  private:
    std::vector<std::vector<int>> blocks_;
    int n_ = 0;
};

// Arc pattern: arcs on [l] with distinct starts and distinct ends. The length
// l is part of the pattern (positions not touched by arcs are unconstrained),
// so it is carried explicitly.
class ArcPattern {
  public:
    ArcPattern() = default;

    ArcPattern(std::vector<Arc> arcs, int length) : arcs_(std::move(arcs)), ell_(length) {
        std::sort(arcs_.begin(), arcs_.end());
        std::set<int> starts, ends;
        for (const auto& [i, j] : arcs_) {
            if (!(1 <= i && i < j && j <= ell_)) throw std::domain_error("arc out of range");
            if (!starts.insert(i).second) throw std::domain_error("duplicate arc start");
            if (!ends.insert(j).second) throw std::domain_error("duplicate arc end");
        }
        if (ell_ < 1) throw std::domain_error("pattern length must be >= 1");
    }

    // Text format: "1-3,2-4". Length defaults to the largest endpoint.
    static ArcPattern parse(const std::string& text, int length = 0) {
        std::vector<Arc> arcs;
        if (!text.empty()) {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto dash = item.find('-');
                if (dash == std::string::npos) throw parse_error("bad arc: '" + item + "'");
                try {
                    arcs.emplace_back(std::stoi(item.substr(0, dash)),
                                      std::stoi(item.substr(dash + 1)));
                } catch (const std::exception&) {
                    throw parse_error("bad arc: '" + item + "'");
                }
            }
        }
        int maxend = 0;
        for (const auto& [i, j] : arcs) maxend = std::max(maxend, j);
        if (length == 0) length = std::max(maxend, 1);
        try {
            return ArcPattern(std::move(arcs), length);
        } catch (const std::domain_error& e) {
            throw parse_error(std::string("invalid arc pattern: ") + e.what());
        }
    }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(arcs_[i].first) + "-" + std::to_string(arcs_[i].second);
        }
        return out;
    }

    const std::vector<Arc>& arcs() const { return arcs_; }
    int length() const { return ell_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    bool is_arc_end(int pos) const {
        for (const auto& [i, j] : arcs_)
            if (j == pos) return true;
        return false;
    }

  private:
    std::vector<Arc> arcs_;
    int ell_ = 0;
};

// Classical permutation pattern of size l (a bijection of [l]).
class PermPattern {
  public:
    PermPattern() = default;

    explicit PermPattern(std::vector<int> values) : values_(std::move(values)) {
        std::vector<int> sorted = values_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != static_cast<int>(i + 1))
                throw std::domain_error("pattern must be a permutation of 1..l");
        inverse_.resize(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i)
            inverse_[static_cast<std::size_t>(values_[i] - 1)] = static_cast<int>(i + 1);
    }

    // "231" for l <= 9, or "2,3,1".
    static PermPattern parse(const std::string& text) {
        try {
            return PermPattern(parse_word(text));
        } catch (const std::domain_error& e) {
            throw parse_error(std::string("invalid pattern: ") + e.what());
        }
    }

    std::string str() const { return word_str(values_); }
    int size() const { return static_cast<int>(values_.size()); }
    int at(int t) const { return values_[static_cast<std::size_t>(t - 1)]; }          // tau(t)
    int inverse_at(int v) const { return inverse_[static_cast<std::size_t>(v - 1)]; }  // tau^-1(v)
    const std::vector<int>& values() const { return values_; }

  private:
    std::vector<int> values_;
    std::vector<int> inverse_;
};

}  // namespace patternlab
