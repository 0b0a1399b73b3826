#ifndef NETTEST_GLOBAL_TEST_HPP
#define NETTEST_GLOBAL_TEST_HPP

#include <cstddef>
#include <span>
#include <utility>

namespace nettest {

// Max-type global test: M_n = max_k t_k^2 with the extreme-value limiting
// null F(x) = exp{-pi^{-1/2} exp(-x/2)} for M_n - 2 log q + log log q.
struct GlobalTestResult {
    double m_n = 0.0;          // max squared statistic
    std::size_t argmax_link = 0;
    double standardized = 0.0; // m_n - 2 log q + log log q
    double pvalue = 1.0;       // limiting-null p-value
    double alpha = 0.0;
    double critical = 0.0;     // rejection threshold for m_n
    bool reject = false;       // standardized >= q_alpha
};

// Max of squares with ties broken by the smallest flat index.
std::pair<double, std::size_t> global_statistic(std::span<const double> t);

// Limiting null CDF of the standardized statistic.
double null_cdf(double x);

// Upper tail 1 - F(x), kept accurate for large x.
double null_sf(double x);

// q_alpha = -log pi - 2 log log (1-alpha)^{-1}.
double null_quantile_offset(double alpha);

// Rejection threshold for M_n: 2 log q - log log q + q_alpha. Requires
// q >= 3 (log log q must be positive for the asymptotic regime to mean
// anything) and alpha in (0,1).
double critical_value(double alpha, std::size_t q);

GlobalTestResult run_global_test(std::span<const double> t, double alpha,
                                 std::size_t q);

} // namespace nettest

#endif // NETTEST_GLOBAL_TEST_HPP
