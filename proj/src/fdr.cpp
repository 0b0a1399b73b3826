#include "nettest/fdr.hpp"

#include <algorithm>
#include <cmath>

#include "nettest/errors.hpp"
#include "nettest/kernels.hpp"

namespace nettest {

double estimate_fdp(double h, std::span<const double> t) {
    require(h >= 0.0, "threshold must be nonnegative");
    const std::size_t q = t.size();
    std::size_t r = 0;
    for (double v : t) {
        if (std::fabs(v) >= h) ++r;
    }
    const double denom = static_cast<double>(r < 1 ? 1 : r);
    return 2.0 * static_cast<double>(q) * kernels::normal_sf(h) / denom;
}

double threshold_search(std::span<const double> t, double alpha) {
    require(!t.empty(), "threshold search needs at least one statistic");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    const std::size_t q = t.size();
    const double cap = std::sqrt(2.0 * std::log(static_cast<double>(q)));

    std::vector<double> abs_sorted(q);
    for (std::size_t k = 0; k < q; ++k) abs_sorted[k] = std::fabs(t[k]);
    std::sort(abs_sorted.begin(), abs_sorted.end());

    // Scanning the observed |t| values suffices: R(h) is constant between
    // consecutive order statistics while 2q{1-Phi(h)} decreases, so any h
    // strictly inside an interval rejects exactly what the interval's right
    // endpoint rejects.
    const double two_q = 2.0 * static_cast<double>(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double v = abs_sorted[i];
        if (v > cap) break;
        if (i > 0 && v == abs_sorted[i - 1]) continue;
        const std::size_t r = q - i; // #{|t| >= v}
        const double fdp = two_q * kernels::normal_sf(v) /
                           static_cast<double>(r < 1 ? 1 : r);
        if (fdp <= alpha) return v;
    }
    return cap;
}

MultipleTestResult run_baseline_test(std::span<const double> t, double alpha) {
    MultipleTestResult res;
    res.method = TestMethod::baseline;
    res.alpha = alpha;
    res.threshold = threshold_search(t, alpha);
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (std::fabs(t[k]) >= res.threshold) {
            res.rejected.push_back(static_cast<std::uint32_t>(k));
        }
    }
    res.n_rejections = res.rejected.size();
    res.estimated_fdp = estimate_fdp(res.threshold, t);
    return res;
}

} // namespace nettest
