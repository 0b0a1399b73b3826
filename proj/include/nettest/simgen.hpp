#ifndef NETTEST_SIMGEN_HPP
#define NETTEST_SIMGEN_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nettest/netdata.hpp"
#include "nettest/rng.hpp"

namespace nettest {

enum class Family {
    bernoulli,
    bernoulli_mixture,
    poisson,
    log_normal,
    transformed_wishart,
    correlation_network,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// A generative simulation design. `k_q` counts union-support links; how they
// split into the group-specific sets and the shared set depends on the
// family (see generate_scenario). Family parameters not present in `params`
// take documented defaults.
struct ScenarioSpec {
    Family family = Family::bernoulli;
    int p = 68;
    int n1 = 100;
    int n2 = 100;
    long k_q = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;

    double param(const std::string& name) const;
    void validate() const;

    // Structured key-value text, the same shape the CLI config uses.
    std::string to_kv_text() const;
    static ScenarioSpec from_kv_text(const std::string& text);
};

// Realized truth of one replication: constructed mean matrices, the true
// alternative set (exact inequality of constructed means), and the support
// sets that generated them. For transformed families the mean matrices live
// on the pre-transform scale, where the design defines equality.
struct ScenarioTruth {
    std::vector<double> s1, s2;     // p x p row-major, zero diagonal
    std::vector<std::uint32_t> h1;  // sorted flat links with s1 != s2
    std::vector<std::uint32_t> m11, m21, m0; // sorted support sets
};

struct ScenarioData {
    int p = 0;
    int n1 = 0;
    int n2 = 0;
    std::size_t q = 0;
    std::vector<double> links1, links2; // sample-major n x q
    ScenarioTruth truth;

    NetworkSampleStack stack(int group) const;
};

// Deterministic: a (spec.seed, replication) pair always produces the same
// data and truth, independent of any other replication.
ScenarioData generate_scenario(const ScenarioSpec& spec,
                               std::uint64_t replication);

// One draw from Wishart(scale, dof) via the Bartlett construction; the mean
// is dof * scale. scale must be symmetric positive definite, dof >= p.
std::vector<double> wishart_sample(std::span<const double> scale, int p,
                                   int dof, SplitRng& rng);

// S = t^{-1} sum_j (X_j - Xbar)(X_j - Xbar)^T for a p x t observation
// matrix (row-major); divisor t, so E[S] = (1 - 1/t) Cov.
std::vector<double> sample_correlation_network(std::span<const double> x,
                                               int p, int t);

} // namespace nettest

#endif // NETTEST_SIMGEN_HPP
