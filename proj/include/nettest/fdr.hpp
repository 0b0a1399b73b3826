#ifndef NETTEST_FDR_HPP
#define NETTEST_FDR_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace nettest {

enum class TestMethod { global, baseline, enhanced };

// Outcome of the grid search inside the power-enhanced procedure.
struct EnhancedDetail {
    std::vector<double> lambdas;           // winning group boundaries
    std::vector<std::size_t> group_sizes;  // q_k
    std::vector<double> pi_hat;            // estimated alternative proportions
    std::vector<double> group_weights;     // w_k per group
    std::size_t candidates_scanned = 0;
};

struct MultipleTestResult {
    TestMethod method = TestMethod::baseline;
    double alpha = 0.0;
    std::vector<std::uint32_t> rejected; // sorted flat link indices
    // baseline: |t| threshold h-hat; enhanced: BH cutoff on adjusted p-values.
    double threshold = 0.0;
    // 2q{1-Phi(h)}/(R(h) v 1) at the chosen threshold; baseline only.
    double estimated_fdp = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_rejections = 0;
    std::optional<EnhancedDetail> enhanced;
};

// FDP estimate 2q{1-Phi(h)} / {R(h) v 1} with R(h) = #{k : |t_k| >= h}.
double estimate_fdp(double h, std::span<const double> t);

// Smallest observed |t_k| in [0, sqrt(2 log q)] whose estimated FDP is at
// most alpha; sqrt(2 log q) when none qualifies. The returned value induces
// the same rejection set as the exact infimum over the interval.
double threshold_search(std::span<const double> t, double alpha);

MultipleTestResult run_baseline_test(std::span<const double> t, double alpha);

} // namespace nettest

#endif // NETTEST_FDR_HPP
