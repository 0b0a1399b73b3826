#ifndef NETTEST_HARNESS_HPP
#define NETTEST_HARNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nettest/fdr.hpp"
#include "nettest/gap.hpp"
#include "nettest/simgen.hpp"

namespace nettest {

std::string method_name(TestMethod m);
TestMethod method_from_name(const std::string& name);

struct ReplicationRecord {
    int rep = 0;
    double fdp = 0.0;
    double power = 0.0;
    std::size_t n_rejections = 0;
    double threshold = 0.0; // |t| threshold, BH cutoff, or global critical value
};

// Empirical FDR/power of one (scenario, method) pair over a replication run.
// For the global method a replication counts as one "rejection" of the
// overall null: power is the rejection indicator under a non-empty
// alternative, fdp the rejection indicator under a pure null.
struct ReplicationReport {
    ScenarioSpec spec;
    TestMethod method = TestMethod::baseline;
    double alpha = 0.05;
    int n_replications = 0;
    std::vector<ReplicationRecord> records;
    double empirical_fdr_pct = 0.0;
    double empirical_power_pct = 0.0;
    double se_fdr_pct = 0.0;   // Monte Carlo standard errors, in percent
    double se_power_pct = 0.0;
    double wall_seconds = 0.0; // informational; omitted from machine formats
};

// (fdp, power) against known truth: fdp = |rejected \ H1| / (|rejected| v 1),
// power = |rejected n H1| / |H1| with 0/0 := 0 for pure-null scenarios.
std::pair<double, double> empirical_metrics(
    std::span<const std::uint32_t> rejected, const ScenarioTruth& truth);

struct HarnessOptions {
    int workers = 0; // <= 0: hardware concurrency
    GapConfig gap;
};

// Runs `reps` replications of the scenario, scoring every requested method
// on the same generated data. Replication r always uses the RNG stream
// derived from (spec.seed, r), so results are identical for any worker
// count. A failing replication aborts the run and reports its index.
std::vector<ReplicationReport> run_replications(
    const ScenarioSpec& spec, const std::vector<TestMethod>& methods,
    double alpha, int reps, const HarnessOptions& options = {});

} // namespace nettest

#endif // NETTEST_HARNESS_HPP
