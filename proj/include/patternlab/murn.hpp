#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace patternlab {

// Truncated law of the urn count M, P(M=m) = m^n / (e B_n m!). Weights are
// true probabilities (normalized against the exact Bell number in log space,
// 80-bit extended precision), with the omitted tail mass below tail_tol.
class MUrnLaw {
  public:
    MUrnLaw(int n, double tail_tol) : n_(n), tail_tol_(tail_tol) {
        if (n < 1) throw std::domain_error("murn_law: n must be >= 1");
        if (!(tail_tol > 0.0 && tail_tol <= 1e-6))
            throw std::domain_error("murn_law: tail_tol must be in (0, 1e-6]");
        bell_n_ = bell_number(n);

        // log of the exact total sum_m m^n/m! = e * B_n
        signed long exp2;
        double mant = mpz_get_d_2exp(&exp2, bell_n_.get_mpz_t());
        const long double log_total =
            1.0L + std::log(static_cast<long double>(mant)) + static_cast<long double>(exp2) * 0.6931471805599453094172321215L;

        auto logw = [&](long m) -> long double {
            return static_cast<long double>(n) * std::log(static_cast<long double>(m)) -
                   std::lgamma(static_cast<long double>(m) + 1.0L);
        };

        // weights are unimodal in m; find the mode by walking up
        long mode = 1;
        while (logw(mode + 1) >= logw(mode)) ++mode;

        // upper support end: geometric bound on the omitted tail
        long mmax = mode;
        const long hard_cap = mode + 200000;
        while (true) {
            long double lw_next = logw(mmax + 1);
            long double p_next = std::exp(lw_next - log_total);
            long double ratio = std::exp(logw(mmax + 2) - lw_next);
            long double tail_bound =
                (ratio < 1.0L) ? p_next / (1.0L - ratio) : std::numeric_limits<long double>::infinity();
            if (tail_bound < static_cast<long double>(tail_tol)) {
                tail_mass_ = static_cast<double>(tail_bound);
                break;
            }
            ++mmax;
            if (mmax > hard_cap)
                throw precision_error("murn_law: tail bound " + std::to_string(tail_tol) +
                                      " not reachable at working precision");
        }

        weights_.reserve(static_cast<std::size_t>(mmax));
        cumulative_.reserve(static_cast<std::size_t>(mmax));
        long double sum = 0.0L;
        for (long m = 1; m <= mmax; ++m) {
            long double p = std::exp(logw(m) - log_total);
            weights_.push_back(p);
            sum += p;
            cumulative_.push_back(sum);
        }
        if (sum > 1.0L) {  // float noise only; the true sum is < 1
            for (auto& p : weights_) p /= sum;
            for (auto& c : cumulative_) c /= sum;
            sum = 1.0L;
        }
        sum_ = sum;

        long double mean = 0.0L, sq = 0.0L;
        for (long m = 1; m <= mmax; ++m) {
            long double p = weights_[static_cast<std::size_t>(m - 1)];
            mean += static_cast<long double>(m) * p;
            sq += static_cast<long double>(m) * static_cast<long double>(m) * p;
        }
        mean_ = static_cast<double>(mean);
        sigma_ = static_cast<double>(std::sqrt(sq - mean * mean));
    }

    int n() const { return n_; }
    const BigInt& bell_n() const { return bell_n_; }
    long m_min() const { return 1; }
    long m_max() const { return static_cast<long>(weights_.size()); }
    double tail_tol() const { return tail_tol_; }
    double tail_mass() const { return tail_mass_; }
    double mean() const { return mean_; }
    double sigma() const { return sigma_; }
    double total_weight() const { return static_cast<double>(sum_); }

    long double weight(long m) const {
        if (m < 1 || m > m_max()) return 0.0L;
        return weights_[static_cast<std::size_t>(m - 1)];
    }

    // E[f(M)] over the truncated support, ascending m (deterministic order).
    template <class Fn>
    long double expect(Fn&& f) const {
        long double acc = 0.0L;
        for (long m = 1; m <= m_max(); ++m)
            acc += weights_[static_cast<std::size_t>(m - 1)] * static_cast<long double>(f(m));
        return acc;
    }

    // Truncated-law moment sum_m m^r P(M=m); r may be negative.
    long double truncated_moment(int r) const {
        return expect([&](long m) {
            long double v = 1.0L;
            for (int t = 0; t < std::abs(r); ++t) v *= static_cast<long double>(m);
            return r >= 0 ? v : 1.0L / v;
        });
    }

    // Inverse-CDF draw from a uniform u in [0,1).
    long sample_from_uniform(double u) const {
        long double target = static_cast<long double>(u);
        std::size_t lo = 0, hi = cumulative_.size() - 1;
        if (target >= cumulative_.back()) return m_max();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cumulative_[mid] > target)
                hi = mid;
            else
                lo = mid + 1;
        }
        return static_cast<long>(lo) + 1;
    }

  private:
    int n_;
    double tail_tol_;
    BigInt bell_n_;
    std::vector<long double> weights_;
    std::vector<long double> cumulative_;
    long double sum_ = 0.0L;
    double tail_mass_ = 0.0;
    double mean_ = 0.0;
    double sigma_ = 0.0;
};

inline MUrnLaw murn_law(int n, double tail_tol) { return MUrnLaw(n, tail_tol); }

// Truncated-sum moment of M; for r >= 0 this must match B_{n+r}/B_n.
inline double moment_M(int n, int r, double tail_tol) {
    if (n + r < 0) throw std::domain_error("moment_M: n + r must be >= 0 for the Bell identity");
    MUrnLaw law(n, tail_tol);
    double value = static_cast<double>(law.truncated_moment(r));
    if (r >= 0) {
        Rational exact = make_rational(bell_number(n + r), bell_number(n));
        double ref = to_double(exact);
        if (std::abs(value - ref) > 1e-9 * std::abs(ref))
            throw precision_error("moment_M: truncated sum drifted from Bell ratio at n=" +
                                  std::to_string(n) + ", r=" + std::to_string(r));
    }
    return value;
}

struct ConcentrationReport {
    int n = 0;
    double mean = 0.0;       // m_n from the truncated law
    double sigma = 0.0;      // sigma_n from the truncated law
    double window = 0.0;     // n^{3/4}
    double prob_outside = 0.0;  // P(|M - m_n| > n^{3/4}), tail-inclusive upper bound
};

inline ConcentrationReport concentration_probe(int n, double tail_tol) {
    if (n < 2) throw std::domain_error("concentration_probe: n must be >= 2");
    MUrnLaw law(n, tail_tol);
    ConcentrationReport rep;
    rep.n = n;
    rep.mean = law.mean();
    rep.sigma = law.sigma();
    rep.window = std::pow(static_cast<double>(n), 0.75);
    long double outside = 0.0L;
    for (long m = 1; m <= law.m_max(); ++m)
        if (std::abs(static_cast<double>(m) - rep.mean) > rep.window) outside += law.weight(m);
    rep.prob_outside = static_cast<double>(outside) + law.tail_mass();
    return rep;
}

}  // namespace patternlab
