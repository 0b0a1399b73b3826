#include <doctest.h>

#include <cmath>
#include <vector>

#include "nettest/errors.hpp"
#include "nettest/global_test.hpp"
#include "nettest/rng.hpp"

using namespace nettest;

TEST_SUITE("global_test") {

TEST_CASE("global statistic and argmax ties") {
    {
        const double t[] = {0.0, 0.0, 0.0};
        const auto [m, arg] = global_statistic({t, 3});
        CHECK(m == 0.0);
        CHECK(arg == 0);
    }
    {
        const double t[] = {1.5, -2.0, 0.3};
        const auto [m, arg] = global_statistic({t, 3});
        CHECK(m == doctest::Approx(4.0));
        CHECK(arg == 1);
    }
    {
        const double t[] = {2.0, -2.0};
        const auto [m, arg] = global_statistic({t, 2});
        CHECK(m == doctest::Approx(4.0));
        CHECK(arg == 0); // smallest flat index wins ties
    }
    CHECK_THROWS_AS(global_statistic({}), ValidationError);
}

TEST_CASE("limiting null distribution") {
    CHECK(null_cdf(0.0) ==
          doctest::Approx(std::exp(-1.0 / std::sqrt(M_PI))).epsilon(1e-15));
    CHECK(null_cdf(0.0) == doctest::Approx(0.56882).epsilon(1e-4));
    CHECK(null_cdf(200.0) == doctest::Approx(1.0));
    CHECK(null_cdf(-50.0) < 1e-9);
    for (double x = -10.0; x < 10.0; x += 0.37) {
        CHECK(null_cdf(x) < null_cdf(x + 1.0));
        CHECK(null_sf(x) == doctest::Approx(1.0 - null_cdf(x)).epsilon(1e-12));
    }
}

TEST_CASE("critical value formula and inverse relation") {
    // direct long-double evaluation of -log pi - 2 log log 1/(1-alpha)
    auto q_alpha_oracle = [](long double alpha) {
        return static_cast<double>(-logl(3.14159265358979323846L) -
                                   2.0L * logl(logl(1.0L / (1.0L - alpha))));
    };
    CHECK(null_quantile_offset(0.05) ==
          doctest::Approx(q_alpha_oracle(0.05L)).epsilon(1e-12));
    CHECK(null_quantile_offset(0.05) == doctest::Approx(4.7957).epsilon(2e-4));

    const double lq = std::log(2278.0);
    CHECK(critical_value(0.05, 2278) ==
          doctest::Approx(2.0 * lq - std::log(lq) + q_alpha_oracle(0.05L))
              .epsilon(1e-12));

    for (double alpha : {0.01, 0.05, 0.1}) {
        CHECK(std::fabs(null_cdf(null_quantile_offset(alpha)) -
                        (1.0 - alpha)) <= 1e-12);
    }

    CHECK_THROWS_AS(critical_value(0.05, 2), ValidationError);
    CHECK_THROWS_AS(critical_value(0.0, 100), ValidationError);
    CHECK_THROWS_AS(critical_value(1.0, 100), ValidationError);
}

TEST_CASE("run_global_test populates a consistent result") {
    std::vector<double> t(2278, 0.0);
    const auto res = run_global_test(t, 0.05, t.size());
    CHECK(res.m_n == 0.0);
    CHECK(!res.reject);
    CHECK(res.pvalue > 0.999); // m_n = 0 is deep in the left tail
    t[100] = 8.0;
    const auto res2 = run_global_test(t, 0.05, t.size());
    CHECK(res2.reject);
    CHECK(res2.argmax_link == 100);
    CHECK(res2.pvalue < 1e-6);
}

TEST_CASE("decision duality on random inputs") {
    SplitRng rng(5, 0);
    for (int it = 0; it < 10000; ++it) {
        const std::size_t q = 3 + (rng.next_u64() % 200);
        std::vector<double> t(q);
        for (auto& v : t) v = 3.0 * rng.normal();
        if (rng.bernoulli(0.3)) t[0] = rng.uniform(3.0, 6.0); // borderline
        const double alpha = rng.uniform(0.005, 0.2);
        const auto res = run_global_test(t, alpha, q);
        CHECK(res.reject == (res.pvalue <= alpha));
        CHECK(res.reject == (res.m_n >= res.critical));
    }
}

TEST_CASE("monotone in the signal: rejection never weakens when t grows") {
    SplitRng rng(6, 0);
    std::vector<double> t(300);
    for (auto& v : t) v = rng.normal();
    double prev_p = 1.1;
    for (double boost : {3.8, 4.6, 6.0}) {
        auto tt = t;
        tt[7] += boost;
        const auto res = run_global_test(tt, 0.05, tt.size());
        CHECK(res.pvalue <= prev_p);
        prev_p = res.pvalue;
    }
}

} // TEST_SUITE
