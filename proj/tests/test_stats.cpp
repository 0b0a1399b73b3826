#include <doctest.h>

#include <cmath>

#include "nettest/errors.hpp"
#include "nettest/stats.hpp"
#include "nettest/rng.hpp"

using namespace nettest;

namespace {

// Two-node stacks hold exactly one link; handy for hand-checked numbers.
NetworkSampleStack one_link_stack(int group, const std::vector<double>& xs) {
    return NetworkSampleStack::from_links(group, 2, xs, xs.size());
}

NetworkSampleStack random_stack(int group, int p, int n, std::uint64_t seed,
                                double lo, double hi) {
    SplitRng rng(seed, static_cast<std::uint64_t>(group));
    const LinkIndexMap map(p);
    std::vector<double> rows(static_cast<std::size_t>(n) * map.q());
    for (auto& v : rows) v = rng.uniform(lo, hi);
    return NetworkSampleStack::from_links(group, p, rows,
                                          static_cast<std::size_t>(n));
}

NetworkSampleStack shifted(const NetworkSampleStack& s, double c) {
    const LinkIndexMap map(s.p());
    auto rows = sample_major_links(s, map);
    for (auto& v : rows) v += c;
    return NetworkSampleStack::from_links(s.group_id(), s.p(), rows,
                                          static_cast<std::size_t>(s.n()));
}

NetworkSampleStack scaled(const NetworkSampleStack& s, double c) {
    const LinkIndexMap map(s.p());
    auto rows = sample_major_links(s, map);
    for (auto& v : rows) v *= c;
    return NetworkSampleStack::from_links(s.group_id(), s.p(), rows,
                                          static_cast<std::size_t>(s.n()));
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("summaries use divisor n, not n-1") {
    const auto s1 = one_link_stack(1, {1.0, 3.0});
    const auto s2 = one_link_stack(2, {0.0, 2.0, 4.0});
    const auto s = link_summaries(s1, s2);
    REQUIRE(s.q == 1);
    CHECK(s.w[0] == 0.0);
    CHECK(s.v1[0] == doctest::Approx(1.0));      // not 2.0
    CHECK(s.v2[0] == doctest::Approx(8.0 / 3.0)); // not 4.0
}

TEST_CASE("hand-checked statistics") {
    const auto s1 = one_link_stack(1, {1.0, 3.0});
    const auto s2 = one_link_stack(2, {0.0, 0.0, 3.0});
    const auto s = link_summaries(s1, s2);
    CHECK(s.w[0] == doctest::Approx(1.0));
    CHECK(s.v1[0] == doctest::Approx(1.0));
    CHECK(s.v2[0] == doctest::Approx(2.0));
    const auto t = test_statistics(s);
    CHECK(t[0] == doctest::Approx(1.0 / std::sqrt(0.5 + 2.0 / 3.0)));
    CHECK(t[0] == doctest::Approx(0.9258).epsilon(1e-4));
}

TEST_CASE("auxiliary statistic hand check") {
    // group 1: mean 2, variance 1, n = 2; group 2: mean 1, variance 2, n = 3
    const auto s1 = one_link_stack(1, {1.0, 3.0});
    const auto s2 = one_link_stack(2, {-1.0, 2.0, 2.0});
    const auto s = link_summaries(s1, s2);
    REQUIRE(s.mean1[0] == doctest::Approx(2.0));
    REQUIRE(s.mean2[0] == doctest::Approx(1.0));
    REQUIRE(s.v1[0] == doctest::Approx(1.0));
    REQUIRE(s.v2[0] == doctest::Approx(2.0));
    const auto aux = auxiliary_statistics(s);
    CHECK(aux.kappa_hat[0] == doctest::Approx(0.75)); // 3*1/(2*2)
    CHECK(aux.a[0] == doctest::Approx(2.75 / std::sqrt(0.875)));
    CHECK(aux.a[0] == doctest::Approx(2.9398).epsilon(1e-4));
}

TEST_CASE("degenerate links") {
    const auto s1 = one_link_stack(1, {2.0, 2.0, 2.0});
    const auto s2 = one_link_stack(2, {2.0, 2.0});
    const auto stats = compute_link_statistics(s1, s2);
    CHECK(stats.degenerate(0));
    CHECK(stats.t[0] == 0.0);
    CHECK(stats.a[0] == 0.0);
    CHECK(stats.pvalue[0] == 1.0);
}

TEST_CASE("one-sided zero variance") {
    const auto s1 = one_link_stack(1, {1.0, 3.0});
    const auto s2 = one_link_stack(2, {1.0, 1.0}); // v2 = 0
    const auto stats = compute_link_statistics(s1, s2);
    CHECK(!stats.degenerate(0));
    CHECK(stats.aux_degenerate(0));
    CHECK(stats.t[0] == doctest::Approx(1.0 / std::sqrt(0.5)));
    CHECK(stats.a[0] == 0.0);
    CHECK(stats.kappa_hat[0] == 0.0);
}

TEST_CASE("group swap negates t elementwise") {
    const auto s1 = random_stack(1, 6, 9, 42, -1.0, 3.0);
    const auto s2 = random_stack(2, 6, 12, 43, -1.0, 3.0);
    const auto t_ab = test_statistics(link_summaries(s1, s2));
    const auto t_ba = test_statistics(link_summaries(s2, s1));
    for (std::size_t k = 0; k < t_ab.size(); ++k) {
        CHECK(t_ab[k] == doctest::Approx(-t_ba[k]).epsilon(1e-12));
    }
}

TEST_CASE("common shift leaves w, v, t, p unchanged; changes a") {
    const auto s1 = random_stack(1, 5, 8, 7, 0.0, 2.0);
    const auto s2 = random_stack(2, 5, 10, 8, 0.0, 2.0);
    const auto base = compute_link_statistics(s1, s2);
    const auto moved = compute_link_statistics(shifted(s1, 2.5),
                                               shifted(s2, 2.5));
    bool a_changed = false;
    for (std::size_t k = 0; k < base.q; ++k) {
        CHECK(moved.w[k] == doctest::Approx(base.w[k]).epsilon(1e-9));
        CHECK(moved.v1[k] == doctest::Approx(base.v1[k]).epsilon(1e-9));
        CHECK(moved.t[k] == doctest::Approx(base.t[k]).epsilon(1e-9));
        CHECK(moved.pvalue[k] ==
              doctest::Approx(base.pvalue[k]).epsilon(1e-9));
        if (std::fabs(moved.a[k] - base.a[k]) > 1e-6) a_changed = true;
    }
    CHECK(a_changed);
}

TEST_CASE("positive rescaling leaves t, a, p unchanged") {
    const auto s1 = random_stack(1, 5, 8, 17, 0.5, 2.0);
    const auto s2 = random_stack(2, 5, 10, 18, 0.5, 2.0);
    const auto base = compute_link_statistics(s1, s2);
    // powers of two scale exactly
    const auto v = compute_link_statistics(scaled(s1, 4.0), scaled(s2, 4.0));
    for (std::size_t k = 0; k < base.q; ++k) {
        CHECK(v.t[k] == base.t[k]);
        CHECK(v.a[k] == base.a[k]);
        CHECK(v.pvalue[k] == base.pvalue[k]);
    }
    // general scale up to rounding
    const auto w = compute_link_statistics(scaled(s1, 3.7), scaled(s2, 3.7));
    for (std::size_t k = 0; k < base.q; ++k) {
        CHECK(w.t[k] == doctest::Approx(base.t[k]).epsilon(1e-10));
        CHECK(w.a[k] == doctest::Approx(base.a[k]).epsilon(1e-10));
    }
}

TEST_CASE("mismatched node counts are rejected") {
    const auto s1 = random_stack(1, 5, 4, 1, 0.0, 1.0);
    const auto s2 = random_stack(2, 6, 4, 2, 0.0, 1.0);
    CHECK_THROWS_AS(link_summaries(s1, s2), ValidationError);
}

} // TEST_SUITE
