#ifndef NETTEST_GAP_HPP
#define NETTEST_GAP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nettest/fdr.hpp"

namespace nettest {

// Tuning knobs of the power-enhanced procedure. The grid bounds and density
// are derived from the data (smallest/largest auxiliary value, spacing close
// to grid_spacing_target in sqrt(log q) units) rather than configured
// directly; grid_truncation caps the bound multipliers at +/-16 to keep the
// search bounded when auxiliary statistics are extreme.
struct GapConfig {
    int k_groups = 3;
    double epsilon = 1e-5;
    double storey_lambda = 0.5;
    double grid_spacing_target = 0.1;
    double grid_truncation = 16.0;
    long n_grid = 0; // grid density N; 0 derives it from the spacing target

    void validate() const;
};

// Links grouped by auxiliary statistic: group k collects
// {i : lambda_{k-1} < a_i <= lambda_k} with lambda_0 = -inf, lambda_K = +inf.
struct GroupPartition {
    std::vector<double> lambdas;
    std::vector<int> group_of;                       // per link
    std::vector<std::vector<std::uint32_t>> groups;  // index sets
    std::vector<std::size_t> sizes;
    std::vector<double> pi_hat;        // filled by the caller
    std::vector<double> group_weights; // filled by compute_weights
};

// Equally spaced candidate boundaries: integer multiples of sqrt(log q)/N
// covering [min a, max a], with the bound multipliers truncated to
// [-grid_truncation, grid_truncation] and N = round(sqrt(log q) /
// grid_spacing_target). May be empty when the auxiliary values are
// (near-)constant.
std::vector<double> build_grid(std::span<const double> a,
                               const GapConfig& cfg);

GroupPartition partition_groups(std::span<const double> a,
                                std::span<const double> lambdas);

// Storey-type alternative proportion: 1 - #{p > lambda}/{(1-lambda) n},
// clamped to [epsilon, 1-epsilon]; an empty group yields epsilon.
double estimate_alt_proportion(std::span<const double> group_pvalues,
                               double storey_lambda, double epsilon);

// Group-wise weights w_k = q (pi_k/(1-pi_k)) / sum_j q_j (pi_j/(1-pi_j));
// fills part.group_weights and returns the per-link weight vector.
// Guarantees sum_i w_i = q up to rounding.
std::vector<double> compute_weights(GroupPartition& part);

// p^w = min(p/w, 1).
std::vector<double> adjust_pvalues(std::span<const double> p,
                                   std::span<const double> w);

struct BhResult {
    std::size_t tau = 0;  // number of rejections
    double cutoff = 0.0;  // largest rejected p-value (0 when tau == 0)
    std::vector<std::uint32_t> rejected;
};

// Step-up BH at level alpha over q = pvalues.size() hypotheses; ties at the
// cutoff are rejected together.
BhResult bh_procedure(std::span<const double> pvalues, double alpha);

// Full procedure: group by auxiliary statistic over every (K-1)-subset of
// the grid, weight, adjust, BH; keep the candidate with the most rejections
// (ties: lexicographically smallest boundary vector) and re-run it to
// produce the final rejection set.
MultipleTestResult run_enhanced_test(std::span<const double> t,
                                     std::span<const double> a, double alpha,
                                     const GapConfig& cfg = {});

// Same, starting from precomputed two-sided p-values.
MultipleTestResult run_enhanced_test_from_pvalues(
    std::span<const double> pvalues, std::span<const double> a, double alpha,
    const GapConfig& cfg = {});

} // namespace nettest

#endif // NETTEST_GAP_HPP
