#include "nettest/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "nettest/errors.hpp"
#include "nettest/global_test.hpp"
#include "nettest/stats.hpp"

namespace nettest {

std::string method_name(TestMethod m) {
    switch (m) {
        case TestMethod::global: return "global";
        case TestMethod::baseline: return "baseline";
        case TestMethod::enhanced: return "enhanced";
    }
    throw InvariantError("unknown method enum value");
}

TestMethod method_from_name(const std::string& name) {
    if (name == "global") return TestMethod::global;
    if (name == "baseline") return TestMethod::baseline;
    if (name == "enhanced") return TestMethod::enhanced;
    throw ValidationError("unknown method: " + name);
}

std::pair<double, double> empirical_metrics(
    std::span<const std::uint32_t> rejected, const ScenarioTruth& truth) {
    std::size_t true_pos = 0;
    auto it = truth.h1.begin();
    for (std::uint32_t k : rejected) {
        while (it != truth.h1.end() && *it < k) ++it;
        if (it != truth.h1.end() && *it == k) {
            ++true_pos;
            ++it;
        }
    }
    const std::size_t r = rejected.size();
    const double fdp = static_cast<double>(r - true_pos) /
                       static_cast<double>(r < 1 ? 1 : r);
    const double power =
        truth.h1.empty() ? 0.0
                         : static_cast<double>(true_pos) /
                               static_cast<double>(truth.h1.size());
    return {fdp, power};
}

namespace {

ReplicationRecord score_one(TestMethod method, int rep,
                            const LinkStatistics& stats,
                            const ScenarioTruth& truth, double alpha,
                            const GapConfig& gap) {
    ReplicationRecord rec;
    rec.rep = rep;
    switch (method) {
        case TestMethod::global: {
            const auto g = run_global_test(stats.t, alpha, stats.q);
            rec.n_rejections = g.reject ? 1 : 0;
            rec.threshold = g.critical;
            rec.power = (g.reject && !truth.h1.empty()) ? 1.0 : 0.0;
            rec.fdp = (g.reject && truth.h1.empty()) ? 1.0 : 0.0;
            return rec;
        }
        case TestMethod::baseline: {
            const auto res = run_baseline_test(stats.t, alpha);
            const auto [fdp, power] = empirical_metrics(res.rejected, truth);
            rec.fdp = fdp;
            rec.power = power;
            rec.n_rejections = res.n_rejections;
            rec.threshold = res.threshold;
            return rec;
        }
        case TestMethod::enhanced: {
            const auto res = run_enhanced_test_from_pvalues(
                stats.pvalue, stats.a, alpha, gap);
            const auto [fdp, power] = empirical_metrics(res.rejected, truth);
            rec.fdp = fdp;
            rec.power = power;
            rec.n_rejections = res.n_rejections;
            rec.threshold = res.threshold;
            return rec;
        }
    }
    throw InvariantError("unknown method enum value");
}

void aggregate(ReplicationReport& report) {
    const auto n = static_cast<double>(report.records.size());
    double mean_fdp = 0.0, mean_power = 0.0;
    for (const auto& r : report.records) {
        mean_fdp += r.fdp;
        mean_power += r.power;
    }
    mean_fdp /= n;
    mean_power /= n;
    double var_fdp = 0.0, var_power = 0.0;
    for (const auto& r : report.records) {
        var_fdp += (r.fdp - mean_fdp) * (r.fdp - mean_fdp);
        var_power += (r.power - mean_power) * (r.power - mean_power);
    }
    const double denom = n > 1.0 ? n - 1.0 : 1.0;
    report.empirical_fdr_pct = 100.0 * mean_fdp;
    report.empirical_power_pct = 100.0 * mean_power;
    report.se_fdr_pct = 100.0 * std::sqrt(var_fdp / denom / n);
    report.se_power_pct = 100.0 * std::sqrt(var_power / denom / n);
}

} // namespace

std::vector<ReplicationReport> run_replications(
    const ScenarioSpec& spec, const std::vector<TestMethod>& methods,
    double alpha, int reps, const HarnessOptions& options) {
    require(reps >= 1, "at least one replication is required");
    require(!methods.empty(), "at least one method is required");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    spec.validate();
    options.gap.validate();

    const auto start = std::chrono::steady_clock::now();

    std::vector<ReplicationReport> reports(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        reports[m].spec = spec;
        reports[m].method = methods[m];
        reports[m].alpha = alpha;
        reports[m].n_replications = reps;
        reports[m].records.resize(static_cast<std::size_t>(reps));
    }

    int workers = options.workers;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    workers = std::min(workers, reps);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    int error_rep = -1;

    auto work = [&] {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= reps || failed.load()) return;
            try {
                const auto data =
                    generate_scenario(spec, static_cast<std::uint64_t>(rep));
                const auto stats = compute_link_statistics_flat(
                    data.links1, data.n1, data.links2, data.n2, data.q);
                for (std::size_t m = 0; m < methods.size(); ++m) {
                    reports[m].records[static_cast<std::size_t>(rep)] =
                        score_one(methods[m], rep, stats, data.truth, alpha,
                                  options.gap);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) {
                    error = std::current_exception();
                    error_rep = rep;
                }
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    if (failed.load()) {
        const std::string where =
            "replication " + std::to_string(error_rep) + " failed: ";
        try {
            std::rethrow_exception(error);
        } catch (const InvariantError& e) {
            throw InvariantError(where + e.what());
        } catch (const std::exception& e) {
            throw ValidationError(where + e.what());
        }
    }

    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    for (auto& report : reports) {
        aggregate(report);
        report.wall_seconds = elapsed;
    }
    return reports;
}

} // namespace nettest
