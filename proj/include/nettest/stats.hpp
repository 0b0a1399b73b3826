#ifndef NETTEST_STATS_HPP
#define NETTEST_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nettest/netdata.hpp"

namespace nettest {

// Per-link first and second moments of the two groups. Means use divisor
// n_d; variances also use divisor n_d (not n_d - 1), matching the statistic
// this library implements.
struct LinkSummaries {
    std::size_t q = 0;
    int n1 = 0;
    int n2 = 0;
    std::vector<double> mean1, mean2; // group sample means
    std::vector<double> v1, v2;       // group variance estimates (divisor n)
    std::vector<double> w;            // mean difference mean1 - mean2
};

// Everything the two multiple-testing procedures consume, per flat link k.
struct LinkStatistics {
    std::size_t q = 0;
    int n1 = 0;
    int n2 = 0;
    std::vector<double> w;
    std::vector<double> v1, v2;
    std::vector<double> t;         // studentized mean difference
    std::vector<double> kappa_hat; // variance-ratio weight (0 when undefined)
    std::vector<double> a;         // auxiliary statistic (0 when undefined)
    std::vector<double> pvalue;    // two-sided normal p-value
    std::vector<std::uint8_t> flags;

    // Both variances zero: the link carries no evidence; t = 0, p = 1.
    bool degenerate(std::size_t k) const { return flags[k] & 1; }
    // At least one variance zero: kappa_hat and a are undefined, set to 0.
    bool aux_degenerate(std::size_t k) const { return (flags[k] & 2) != 0; }
};

struct AuxiliaryStatistics {
    std::vector<double> kappa_hat;
    std::vector<double> a;
    std::vector<std::uint8_t> flags;
};

LinkSummaries link_summaries(const NetworkSampleStack& stack1,
                             const NetworkSampleStack& stack2);

// t_k = w_k / sqrt(v1_k/n1 + v2_k/n2); degenerate links get t = 0.
std::vector<double> test_statistics(const LinkSummaries& s);

// kappa_k = (n2 v1_k)/(n1 v2_k), a_k = (m1_k + kappa m2_k) /
// sqrt(v1_k/n1 + kappa^2 v2_k/n2); links with a zero variance are flagged
// and get kappa = a = 0.
AuxiliaryStatistics auxiliary_statistics(const LinkSummaries& s);

// p_k = 2 {1 - Phi(|t_k|)}, evaluated as erfc(|t|/sqrt(2)) so extreme tails
// keep full precision.
std::vector<double> two_sided_pvalues(std::span<const double> t);

LinkStatistics compute_link_statistics(const NetworkSampleStack& stack1,
                                       const NetworkSampleStack& stack2);

// Same computation starting from already-flattened data: n rows of q link
// values per group. Used by the simulation harness to skip matrix
// round-trips.
LinkStatistics compute_link_statistics_flat(std::span<const double> links1,
                                            int n1,
                                            std::span<const double> links2,
                                            int n2, std::size_t q);

} // namespace nettest

#endif // NETTEST_STATS_HPP
