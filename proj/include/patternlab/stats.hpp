#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace patternlab {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-sample Kolmogorov-Smirnov sup-distance against the standard normal.
inline double ks_distance(std::vector<double> sample) {
    if (sample.size() < 2) throw std::domain_error("ks_distance: sample too small");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double phi = normal_cdf(sample[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - phi));
        d = std::max(d, std::abs(static_cast<double>(i) / n - phi));
    }
    return d;
}

struct SampleMoments {
    double mean = 0.0;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;  // central moments
};

inline SampleMoments central_moments(const std::vector<double>& sample) {
    SampleMoments s;
    const double n = static_cast<double>(sample.size());
    for (double x : sample) s.mean += x;
    s.mean /= n;
    for (double x : sample) {
        double d = x - s.mean;
        double d2 = d * d;
        s.m2 += d2;
        s.m3 += d2 * d;
        s.m4 += d2 * d2;
    }
    s.m2 /= n;
    s.m3 /= n;
    s.m4 /= n;
    return s;
}

// k-statistics, the unbiased cumulant estimators:
//   k1 = mean
//   k2 = n/(n-1) m2
//   k3 = n^2 /((n-1)(n-2)) m3
//   k4 = n^2 [(n+1) m4 - 3(n-1) m2^2] / ((n-1)(n-2)(n-3))
// with m_r the central sample moments.
inline std::vector<double> k_statistics(const std::vector<double>& sample, int max_order) {
    if (max_order < 1 || max_order > 4) throw std::domain_error("k_statistics: order must be 1..4");
    const double n = static_cast<double>(sample.size());
    if (sample.size() < static_cast<std::size_t>(max_order))
        throw std::domain_error("k_statistics: sample too small");
    SampleMoments s = central_moments(sample);
    std::vector<double> k;
    k.push_back(s.mean);
    if (max_order >= 2) k.push_back(n / (n - 1.0) * s.m2);
    if (max_order >= 3) k.push_back(n * n / ((n - 1.0) * (n - 2.0)) * s.m3);
    if (max_order >= 4)
        k.push_back(n * n * ((n + 1.0) * s.m4 - 3.0 * (n - 1.0) * s.m2 * s.m2) /
                    ((n - 1.0) * (n - 2.0) * (n - 3.0)));
    return k;
}

// Least-squares slope of log(variance) against log(size).
inline double variance_scaling_slope(const std::vector<double>& sizes,
                                     const std::vector<double>& variances) {
    if (sizes.size() != variances.size() || sizes.size() < 2)
        throw std::domain_error("variance_scaling_slope: need >= 2 matched points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] <= 0.0 || variances[i] <= 0.0)
            throw std::domain_error("variance_scaling_slope: nonpositive input");
        xs.push_back(std::log(sizes[i]));
        ys.push_back(std::log(variances[i]));
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= static_cast<double>(xs.size());
    ym /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xm) * (ys[i] - ym);
        den += (xs[i] - xm) * (xs[i] - xm);
    }
    return num / den;
}

// Regularized upper incomplete gamma Q(a, x), series/continued-fraction split.
inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Q(a,x) by Lentz continued fraction
    const double fpmin = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_pvalue(double stat, int dof) {
    if (dof < 1) throw std::domain_error("chi_square_pvalue: dof must be >= 1");
    return gamma_q(static_cast<double>(dof) / 2.0, stat / 2.0);
}

// Pearson chi-square goodness of fit; expected counts given per cell.
inline double chi_square_stat(const std::vector<double>& observed,
                              const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::domain_error("chi_square_stat: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::domain_error("chi_square_stat: nonpositive expectation");
        double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

// Independence test on a contingency table; returns the p-value.
inline double chi_square_independence_pvalue(const std::vector<std::vector<double>>& table) {
    const std::size_t rows = table.size();
    if (rows < 2) throw std::domain_error("independence test: need >= 2 rows");
    const std::size_t cols = table.front().size();
    if (cols < 2) throw std::domain_error("independence test: need >= 2 cols");
    std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            rsum[r] += table[r][c];
            csum[c] += table[r][c];
            total += table[r][c];
        }
    double stat = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double e = rsum[r] * csum[c] / total;
            if (e <= 0.0) throw std::domain_error("independence test: empty margin");
            double d = table[r][c] - e;
            stat += d * d / e;
        }
    int dof = static_cast<int>((rows - 1) * (cols - 1));
    return chi_square_pvalue(stat, dof);
}

}  // namespace patternlab
