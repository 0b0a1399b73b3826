#ifndef NETTEST_TESTS_TESTUTIL_HPP
#define NETTEST_TESTS_TESTUTIL_HPP

// Independent reference implementations ("oracles") used only by tests.
// They deliberately avoid the library's own code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nettest/rng.hpp"

namespace testutil {

// Long-double erfc: Taylor series for small arguments, the A&S 7.1.14
// continued fraction for the tail. Good to ~1e-18 relative, far below the
// 1e-12 absolute tolerance it is used to enforce.
inline long double erfc_oracle(long double x) {
    constexpr long double pi_l = 3.14159265358979323846264338327950288L;
    if (x < 0.0L) return 2.0L - erfc_oracle(-x);
    if (x < 1.5L) {
        const long double xx = x * x;
        long double sum = 0.0L;
        long double c = x; // x^{2k+1} / k!
        for (int k = 0; k < 160; ++k) {
            const long double term = c / static_cast<long double>(2 * k + 1);
            sum += (k % 2 == 0) ? term : -term;
            c = c * xx / static_cast<long double>(k + 1);
        }
        return 1.0L - sum * 2.0L / sqrtl(pi_l);
    }
    if (x > 120.0L) return 0.0L;
    long double f = x;
    for (int n = 400; n >= 1; --n) {
        f = x + (static_cast<long double>(n) / 2.0L) / f;
    }
    return expl(-x * x) / sqrtl(pi_l) / f;
}

// 1 - Phi(x) in long double.
inline long double normal_sf_oracle(long double x) {
    constexpr long double inv_sqrt2_l = 0.70710678118654752440084436210484904L;
    return 0.5L * erfc_oracle(x * inv_sqrt2_l);
}

// Step-up BH by enumerating candidate cutoff values and checking the budget
// inequality directly: cutoff c is feasible iff c <= alpha * #{p <= c} / q.
struct BhOracleResult {
    std::size_t count = 0;
    std::vector<std::uint32_t> rejected;
};

inline BhOracleResult bh_oracle(std::span<const double> p, double alpha) {
    const std::size_t q = p.size();
    double best_cutoff = -1.0;
    for (double c : p) {
        std::size_t m = 0;
        for (double v : p) {
            if (v <= c) ++m;
        }
        if (c <= alpha * static_cast<double>(m) / static_cast<double>(q) &&
            c > best_cutoff) {
            best_cutoff = c;
        }
    }
    BhOracleResult res;
    if (best_cutoff < 0.0) return res;
    for (std::size_t k = 0; k < q; ++k) {
        if (p[k] <= best_cutoff) {
            res.rejected.push_back(static_cast<std::uint32_t>(k));
        }
    }
    res.count = res.rejected.size();
    return res;
}

// Numeric infimum search for the baseline threshold: walk a 1e-4 grid over
// [0, sqrt(2 log q)] augmented with the observed |t| values (so rejection-set
// comparisons are exact at interval boundaries), take the first point whose
// estimated FDP is within alpha, else the cap. Tail values at the fixed grid
// points are cached across calls; R(h) comes from a sorted scan.
inline std::vector<std::uint32_t> threshold_oracle_rejections(
    std::span<const double> t, double alpha) {
    const std::size_t q = t.size();
    const double cap = std::sqrt(2.0 * std::log(static_cast<double>(q)));

    static std::vector<double> grid_sf; // sf at i * 1e-4
    const auto need = static_cast<std::size_t>(cap / 1e-4) + 2;
    while (grid_sf.size() < need) {
        grid_sf.push_back(static_cast<double>(normal_sf_oracle(
            1e-4 * static_cast<double>(grid_sf.size()))));
    }

    std::vector<double> abs_sorted(q);
    for (std::size_t k = 0; k < q; ++k) abs_sorted[k] = std::fabs(t[k]);
    std::sort(abs_sorted.begin(), abs_sorted.end());
    auto r_of = [&](double h) {
        return static_cast<std::size_t>(
            abs_sorted.end() -
            std::lower_bound(abs_sorted.begin(), abs_sorted.end(), h));
    };
    auto fdp_at = [&](double h, double sf) {
        const std::size_t r = r_of(h);
        return 2.0 * static_cast<double>(q) * sf /
               static_cast<double>(r < 1 ? 1 : r);
    };

    struct Candidate {
        double h;
        double sf;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; 1e-4 * static_cast<double>(i) <= cap; ++i) {
        candidates.push_back({1e-4 * static_cast<double>(i), grid_sf[i]});
    }
    candidates.push_back(
        {cap, static_cast<double>(normal_sf_oracle(cap))});
    for (double v : abs_sorted) {
        if (v <= cap) {
            candidates.push_back(
                {v, static_cast<double>(normal_sf_oracle(v))});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.h < b.h; });

    double h_hat = cap;
    for (const auto& c : candidates) {
        if (fdp_at(c.h, c.sf) <= alpha) {
            h_hat = c.h;
            break;
        }
    }
    std::vector<std::uint32_t> rejected;
    for (std::size_t k = 0; k < q; ++k) {
        if (std::fabs(t[k]) >= h_hat) {
            rejected.push_back(static_cast<std::uint32_t>(k));
        }
    }
    return rejected;
}

// Kolmogorov-Smirnov distance of a sample from the standard normal.
inline double ks_distance_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf =
            1.0 - static_cast<double>(normal_sf_oracle(sample[i]));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
    }
    return d;
}

inline double correlation(std::span<const double> x,
                          std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace testutil

#endif // NETTEST_TESTS_TESTUTIL_HPP
