#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pv {

struct ChiSquareReport {
    double statistic = 0.0;
    double dof = 0.0;
    double threshold = 0.0; // dof + 4*sqrt(2*dof)
    bool pass = false;
};

// One-sample chi-square against given expected counts. A 4-sigma threshold on
// the chi-square statistic (mean dof, variance 2*dof) keeps flakiness negligible.
inline ChiSquareReport chi_square_counts(const std::vector<double>& observed,
                                         const std::vector<double>& expected) {
    ChiSquareReport r;
    std::size_t bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) continue;
        double d = observed[i] - expected[i];
        r.statistic += d * d / expected[i];
        ++bins;
    }
    r.dof = bins > 1 ? double(bins - 1) : 1.0;
    r.threshold = r.dof + 4.0 * std::sqrt(2.0 * r.dof);
    r.pass = r.statistic <= r.threshold;
    return r;
}

inline ChiSquareReport chi_square_uniform(const std::vector<std::uint64_t>& counts) {
    double total = 0;
    for (auto c : counts) total += double(c);
    std::vector<double> obs(counts.begin(), counts.end());
    std::vector<double> exp(counts.size(), total / double(counts.size()));
    return chi_square_counts(obs, exp);
}

// Two-sample chi-square over arbitrary categories. Categories with small
// combined counts are pooled so every expected cell count is >= 5.
inline ChiSquareReport two_sample_chi_square(const std::map<std::string, std::uint64_t>& a,
                                             const std::map<std::string, std::uint64_t>& b) {
    double na = 0, nb = 0;
    std::map<std::string, std::pair<double, double>> merged;
    for (auto& [k, v] : a) { merged[k].first += double(v); na += double(v); }
    for (auto& [k, v] : b) { merged[k].second += double(v); nb += double(v); }

    ChiSquareReport r;
    double n = na + nb;
    if (n == 0 || na == 0 || nb == 0) return r;
    std::size_t bins = 0;
    double pool_a = 0, pool_b = 0;
    auto add_cell = [&](double ca, double cb) {
        double tot = ca + cb;
        double ea = tot * na / n, eb = tot * nb / n;
        double da = ca - ea, db = cb - eb;
        r.statistic += da * da / ea + db * db / eb;
        ++bins;
    };
    for (auto& [k, v] : merged) {
        double tot = v.first + v.second;
        if (tot * na / n < 5.0 || tot * nb / n < 5.0) {
            pool_a += v.first;
            pool_b += v.second;
        } else {
            add_cell(v.first, v.second);
        }
    }
    if ((pool_a + pool_b) * na / n >= 5.0 && (pool_a + pool_b) * nb / n >= 5.0)
        add_cell(pool_a, pool_b);
    r.dof = bins > 1 ? double(bins - 1) : 1.0;
    r.threshold = r.dof + 4.0 * std::sqrt(2.0 * r.dof);
    r.pass = r.statistic <= r.threshold;
    return r;
}

// 4-sigma upper bound on an empirical frequency around rate p with T trials
inline double freq_bound(double p, std::uint64_t trials) {
    return p + 4.0 * std::sqrt(p * (1.0 - p) / double(trials));
}

} // namespace pv
