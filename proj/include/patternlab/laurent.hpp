#pragma once

#include <map>
#include <utility>

#include "rational.hpp"

namespace patternlab {

// Sparse Laurent polynomial in (n, M): (power of n, power of M) -> coefficient.
// Evaluation and degree queries only; no symbolic algebra.
class LaurentPoly {
  public:
    void add(int pow_n, int pow_m, const Rational& coeff) {
        if (coeff == 0) return;
        auto key = std::make_pair(pow_n, pow_m);
        auto it = coeffs_.find(key);
        if (it == coeffs_.end()) {
            coeffs_.emplace(key, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    bool empty() const { return coeffs_.empty(); }

    // total degree (deg n = deg M = 1)
    int degree() const {
        int d = 0;
        bool first = true;
        for (const auto& [key, c] : coeffs_) {
            int t = key.first + key.second;
            if (first || t > d) d = t;
            first = false;
        }
        return d;
    }

    Rational evaluate(const Rational& n, const Rational& m) const {
        Rational acc(0);
        for (const auto& [key, c] : coeffs_) acc += c * ipow(n, key.first) * ipow(m, key.second);
        return acc;
    }

    const std::map<std::pair<int, int>, Rational>& coefficients() const { return coeffs_; }

  private:
    static Rational ipow(const Rational& base, int e) {
        if (e == 0) return Rational(1);
        if (e < 0) {
            if (base == 0) throw std::domain_error("LaurentPoly: negative power of zero");
            return Rational(1) / ipow(base, -e);
        }
        Rational r(1);
        for (int t = 0; t < e; ++t) r *= base;
        return r;
    }

    std::map<std::pair<int, int>, Rational> coeffs_;
};

}  // namespace patternlab
