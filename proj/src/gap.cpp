#include "nettest/gap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nettest/errors.hpp"
#include "nettest/stats.hpp"

namespace nettest {

void GapConfig::validate() const {
    require(k_groups >= 1, "k_groups must be at least 1");
    require(epsilon > 0.0 && epsilon < 0.5, "epsilon must lie in (0, 0.5)");
    require(storey_lambda > 0.0 && storey_lambda < 1.0,
            "storey_lambda must lie in (0,1)");
    require(grid_spacing_target > 0.0, "grid spacing target must be positive");
    require(grid_truncation > 0.0, "grid truncation must be positive");
    require(n_grid >= 0, "n_grid must be nonnegative");
}

namespace {

double storey_pi_from_counts(std::size_t n_above, std::size_t size,
                             double lambda, double epsilon) {
    if (size == 0) return epsilon;
    const double raw = 1.0 - static_cast<double>(n_above) /
                                 ((1.0 - lambda) * static_cast<double>(size));
    return std::min(std::max(raw, epsilon), 1.0 - epsilon);
}

// w_k = q odds_k / sum_j q_j odds_j with odds = pi/(1-pi).
std::vector<double> weights_from_groups(const std::vector<std::size_t>& sizes,
                                        const std::vector<double>& pi_hat) {
    const std::size_t k_groups = sizes.size();
    const double q = static_cast<double>(
        std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
    std::vector<double> odds(k_groups);
    double norm = 0.0;
    for (std::size_t k = 0; k < k_groups; ++k) {
        odds[k] = pi_hat[k] / (1.0 - pi_hat[k]);
        norm += static_cast<double>(sizes[k]) * odds[k];
    }
    std::vector<double> w(k_groups);
    for (std::size_t k = 0; k < k_groups; ++k) {
        w[k] = q * odds[k] / norm;
    }
    return w;
}

// The BH step-up threshold for ordered position i (1-based).
inline double bh_threshold(double alpha, std::size_t i, std::size_t q) {
    return alpha * static_cast<double>(i) / static_cast<double>(q);
}

} // namespace

std::vector<double> build_grid(std::span<const double> a,
                               const GapConfig& cfg) {
    cfg.validate();
    const std::size_t q = a.size();
    require(q >= 3, "grid construction needs q >= 3");
    const double slq = std::sqrt(std::log(static_cast<double>(q)));
    const long n_grid =
        cfg.n_grid > 0
            ? cfg.n_grid
            : std::max(1L, std::lround(slq / cfg.grid_spacing_target));
    const double spacing = slq / static_cast<double>(n_grid);
    double lo = a[0], hi = a[0];
    for (double v : a) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double c1 =
        std::clamp(lo / slq, -cfg.grid_truncation, cfg.grid_truncation);
    const double c2 =
        std::clamp(hi / slq, -cfg.grid_truncation, cfg.grid_truncation);
    const long j_lo = static_cast<long>(
        std::ceil(c1 * static_cast<double>(n_grid)));
    const long j_hi = static_cast<long>(
        std::floor(c2 * static_cast<double>(n_grid)));
    std::vector<double> grid;
    if (j_lo > j_hi) return grid;
    grid.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
    for (long j = j_lo; j <= j_hi; ++j) {
        grid.push_back(static_cast<double>(j) * spacing);
    }
    return grid;
}

GroupPartition partition_groups(std::span<const double> a,
                                std::span<const double> lambdas) {
    for (std::size_t k = 1; k < lambdas.size(); ++k) {
        require(lambdas[k - 1] < lambdas[k],
                "group boundaries must be strictly increasing");
    }
    const std::size_t k_groups = lambdas.size() + 1;
    GroupPartition part;
    part.lambdas.assign(lambdas.begin(), lambdas.end());
    part.group_of.resize(a.size());
    part.groups.resize(k_groups);
    part.sizes.assign(k_groups, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        // group = #{lambda_k < a_i}; a value equal to a boundary stays below.
        const int g = static_cast<int>(
            std::lower_bound(lambdas.begin(), lambdas.end(), a[i]) -
            lambdas.begin());
        part.group_of[i] = g;
        part.groups[static_cast<std::size_t>(g)].push_back(
            static_cast<std::uint32_t>(i));
        ++part.sizes[static_cast<std::size_t>(g)];
    }
    return part;
}

double estimate_alt_proportion(std::span<const double> group_pvalues,
                               double storey_lambda, double epsilon) {
    std::size_t above = 0;
    for (double p : group_pvalues) {
        if (p > storey_lambda) ++above;
    }
    return storey_pi_from_counts(above, group_pvalues.size(), storey_lambda,
                                 epsilon);
}

std::vector<double> compute_weights(GroupPartition& part) {
    const std::size_t k_groups = part.sizes.size();
    require(part.pi_hat.size() == k_groups,
            "pi_hat must be estimated before computing weights");
    for (double pi : part.pi_hat) {
        require(pi > 0.0 && pi < 1.0, "pi_hat must lie strictly in (0,1)");
    }
    part.group_weights = weights_from_groups(part.sizes, part.pi_hat);
    std::vector<double> w(part.group_of.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = part.group_weights[static_cast<std::size_t>(part.group_of[i])];
    }
    // sum_k q_k w_k == q up to rounding; a violation means the formula or
    // the partition is corrupted.
    double total = 0.0;
    for (std::size_t k = 0; k < k_groups; ++k) {
        total += static_cast<double>(part.sizes[k]) * part.group_weights[k];
    }
    const double q = static_cast<double>(w.size());
    affirm(q == 0.0 || std::fabs(total - q) <= 1e-9 * q,
           "group weights do not preserve the total test budget");
    return w;
}

std::vector<double> adjust_pvalues(std::span<const double> p,
                                   std::span<const double> w) {
    require(p.size() == w.size(), "p-value and weight lengths differ");
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        require(w[i] > 0.0, "weights must be positive");
        out[i] = std::min(p[i] / w[i], 1.0);
    }
    return out;
}

BhResult bh_procedure(std::span<const double> pvalues, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    const std::size_t q = pvalues.size();
    require(q >= 1, "BH needs at least one p-value");
    for (double p : pvalues) {
        require(p >= 0.0 && p <= 1.0 && std::isfinite(p),
                "p-values must lie in [0,1]");
    }
    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    BhResult res;
    for (std::size_t i = q; i >= 1; --i) {
        if (sorted[i - 1] <= bh_threshold(alpha, i, q)) {
            res.tau = i;
            break;
        }
    }
    if (res.tau == 0) return res;
    res.cutoff = sorted[res.tau - 1];
    for (std::size_t k = 0; k < q; ++k) {
        if (pvalues[k] <= res.cutoff) {
            res.rejected.push_back(static_cast<std::uint32_t>(k));
        }
    }
    // Ties cannot straddle the cutoff: a tied value above position tau would
    // itself satisfy the step-up condition.
    affirm(res.rejected.size() == res.tau,
           "BH cutoff does not reproduce the step-up rejection count");
    return res;
}

namespace {

struct CandidateEval {
    BhResult bh;
    GroupPartition part;
};

// One full pass of the grouped procedure for a fixed boundary vector.
CandidateEval evaluate_candidate(std::span<const double> pvalues,
                                 std::span<const double> a,
                                 std::span<const double> lambdas, double alpha,
                                 const GapConfig& cfg) {
    CandidateEval ev;
    ev.part = partition_groups(a, lambdas);
    const std::size_t k_groups = ev.part.sizes.size();
    ev.part.pi_hat.resize(k_groups);
    std::vector<double> buf;
    for (std::size_t k = 0; k < k_groups; ++k) {
        buf.clear();
        for (std::uint32_t idx : ev.part.groups[k]) buf.push_back(pvalues[idx]);
        ev.part.pi_hat[k] =
            estimate_alt_proportion(buf, cfg.storey_lambda, cfg.epsilon);
    }
    const auto w = compute_weights(ev.part);
    const auto pw = adjust_pvalues(pvalues, w);
    ev.bh = bh_procedure(pw, alpha);
    return ev;
}

// Rejection-count evaluation of every grid candidate without materializing
// adjusted p-values. Links are bucketed by grid position; a prefix-count
// matrix over (p-value rank, grid bucket) answers "how many links of group k
// have p/w_k <= threshold" in O(log q). The BH count is then the largest
// fixed point of R -> #{p^w <= alpha R / q}, found by downward iteration.
// All comparisons replicate evaluate_candidate() exactly, division included,
// so the winning candidate's re-run must agree.
class CandidateScan {
  public:
    CandidateScan(std::span<const double> pvalues, std::span<const double> a,
                  const std::vector<double>& grid, const GapConfig& cfg,
                  double alpha)
        : q_(pvalues.size()),
          n_bins_(grid.size() + 1),
          alpha_(alpha),
          lambda_(cfg.storey_lambda),
          epsilon_(cfg.epsilon) {
        // bucket b = #{grid points < a_i}, so "a_i <= grid[j]" <=> "b <= j".
        std::vector<int> bucket(q_);
        for (std::size_t i = 0; i < q_; ++i) {
            bucket[i] = static_cast<int>(
                std::lower_bound(grid.begin(), grid.end(), a[i]) -
                grid.begin());
        }
        std::vector<std::uint32_t> order(q_);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t x, std::uint32_t y) {
                             return pvalues[x] < pvalues[y];
                         });
        sorted_p_.resize(q_);
        for (std::size_t r = 0; r < q_; ++r) sorted_p_[r] = pvalues[order[r]];

        counts_.assign((q_ + 1) * n_bins_, 0);
        for (std::size_t r = 1; r <= q_; ++r) {
            const std::int32_t* prev = counts_.data() + (r - 1) * n_bins_;
            std::int32_t* row = counts_.data() + r * n_bins_;
            const int b = bucket[order[r - 1]];
            for (std::size_t j = 0; j < n_bins_; ++j) {
                row[j] = prev[j] + (static_cast<int>(j) >= b ? 1 : 0);
            }
        }
        all_by_bin_.assign(n_bins_, 0);
        above_by_bin_.assign(n_bins_, 0);
        for (std::size_t i = 0; i < q_; ++i) {
            const auto b = static_cast<std::size_t>(bucket[i]);
            ++all_by_bin_[b];
            if (pvalues[i] > lambda_) ++above_by_bin_[b];
        }
        for (std::size_t j = 1; j < n_bins_; ++j) {
            all_by_bin_[j] += all_by_bin_[j - 1];
            above_by_bin_[j] += above_by_bin_[j - 1];
        }
    }

    // boundaries: strictly increasing grid indices (size K-1).
    std::size_t rejection_count(const std::vector<int>& boundaries) const {
        const std::size_t k_groups = boundaries.size() + 1;
        sizes_.assign(k_groups, 0);
        pi_.assign(k_groups, 0.0);
        for (std::size_t k = 0; k < k_groups; ++k) {
            const long hi = (k + 1 < k_groups)
                                ? boundaries[k]
                                : static_cast<long>(n_bins_) - 1;
            const long lo = (k > 0) ? boundaries[k - 1] : -1;
            const std::size_t total = prefix_all(hi) - prefix_all(lo);
            const std::size_t above = prefix_above(hi) - prefix_above(lo);
            sizes_[k] = total;
            pi_[k] = storey_pi_from_counts(above, total, lambda_, epsilon_);
        }
        weights_ = weights_from_groups(sizes_, pi_);

        // Downward fixed-point iteration for the step-up count.
        std::size_t r = q_;
        for (;;) {
            const std::size_t g = count_adjusted_below(boundaries, r);
            if (g >= r) return r;
            r = g;
        }
    }

  private:
    std::size_t prefix_all(long bin) const {
        return bin < 0 ? 0 : all_by_bin_[static_cast<std::size_t>(bin)];
    }
    std::size_t prefix_above(long bin) const {
        return bin < 0 ? 0 : above_by_bin_[static_cast<std::size_t>(bin)];
    }

    // #{i : p_i / w_{group(i)} <= alpha R / q}.
    std::size_t count_adjusted_below(const std::vector<int>& boundaries,
                                     std::size_t r_current) const {
        const double thr = bh_threshold(alpha_, r_current, q_);
        const std::size_t k_groups = boundaries.size() + 1;
        std::size_t total = 0;
        for (std::size_t k = 0; k < k_groups; ++k) {
            if (sizes_[k] == 0) continue;
            const double w = weights_[k];
            const auto rank = static_cast<std::size_t>(
                std::partition_point(sorted_p_.begin(), sorted_p_.end(),
                                     [&](double pv) { return pv / w <= thr; }) -
                sorted_p_.begin());
            const long hi = (k + 1 < k_groups)
                                ? boundaries[k]
                                : static_cast<long>(n_bins_) - 1;
            const long lo = (k > 0) ? boundaries[k - 1] : -1;
            total += count_at(rank, hi) - count_at(rank, lo);
        }
        return total;
    }

    std::size_t count_at(std::size_t rank, long bin) const {
        if (bin < 0) return 0;
        return static_cast<std::size_t>(
            counts_[rank * n_bins_ + static_cast<std::size_t>(bin)]);
    }

    std::size_t q_;
    std::size_t n_bins_;
    double alpha_;
    double lambda_;
    double epsilon_;
    std::vector<double> sorted_p_;
    std::vector<std::int32_t> counts_; // (q+1) x n_bins prefix counts
    std::vector<std::size_t> all_by_bin_;
    std::vector<std::size_t> above_by_bin_;
    mutable std::vector<std::size_t> sizes_;
    mutable std::vector<double> pi_;
    mutable std::vector<double> weights_;
};

MultipleTestResult assemble(const CandidateEval& ev, double alpha,
                            std::size_t candidates_scanned) {
    MultipleTestResult res;
    res.method = TestMethod::enhanced;
    res.alpha = alpha;
    res.rejected = ev.bh.rejected;
    res.n_rejections = ev.bh.tau;
    res.threshold = ev.bh.cutoff;
    EnhancedDetail detail;
    detail.lambdas = ev.part.lambdas;
    detail.group_sizes = ev.part.sizes;
    detail.pi_hat = ev.part.pi_hat;
    detail.group_weights = ev.part.group_weights;
    detail.candidates_scanned = candidates_scanned;
    res.enhanced = std::move(detail);
    return res;
}

// Direct evaluation of every candidate; used when the prefix-count matrix
// would be unreasonably large.
constexpr std::size_t scan_matrix_entry_limit = std::size_t{1} << 26;

} // namespace

MultipleTestResult run_enhanced_test_from_pvalues(
    std::span<const double> pvalues, std::span<const double> a, double alpha,
    const GapConfig& cfg) {
    cfg.validate();
    require(pvalues.size() == a.size(),
            "p-value and auxiliary vectors differ in length");
    require(!pvalues.empty(), "enhanced test needs at least one link");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");

    const std::size_t k_groups = static_cast<std::size_t>(cfg.k_groups);
    std::vector<double> grid;
    if (k_groups > 1 && pvalues.size() >= 3) grid = build_grid(a, cfg);

    if (k_groups == 1 || grid.size() < k_groups - 1) {
        // Single group: all weights are exactly 1 and the procedure is plain
        // BH. Also the fallback when the grid degenerates.
        const auto ev = evaluate_candidate(pvalues, a, {}, alpha, cfg);
        return assemble(ev, alpha, 1);
    }

    const std::size_t n_cut = k_groups - 1;
    std::vector<int> cursor(n_cut);
    std::iota(cursor.begin(), cursor.end(), 0);
    std::vector<int> best_cursor;
    std::size_t best_count = 0;
    bool have_best = false;
    std::size_t scanned = 0;

    const bool use_fast =
        (pvalues.size() + 1) * (grid.size() + 1) <= scan_matrix_entry_limit;
    std::optional<CandidateScan> scan;
    if (use_fast) scan.emplace(pvalues, a, grid, cfg, alpha);
    std::vector<double> lambda_buf(n_cut);
    for (;;) {
        std::size_t count;
        if (use_fast) {
            count = scan->rejection_count(cursor);
        } else {
            for (std::size_t k = 0; k < n_cut; ++k) {
                lambda_buf[k] = grid[static_cast<std::size_t>(cursor[k])];
            }
            count = evaluate_candidate(pvalues, a, lambda_buf, alpha, cfg)
                        .bh.tau;
        }
        ++scanned;
        if (!have_best || count > best_count) {
            have_best = true;
            best_count = count;
            best_cursor = cursor;
        }
        // next (K-1)-combination of grid indices, lexicographic
        long pos = static_cast<long>(n_cut) - 1;
        while (pos >= 0 &&
               cursor[static_cast<std::size_t>(pos)] ==
                   static_cast<int>(grid.size() - n_cut + static_cast<std::size_t>(pos))) {
            --pos;
        }
        if (pos < 0) break;
        ++cursor[static_cast<std::size_t>(pos)];
        for (auto j = static_cast<std::size_t>(pos) + 1; j < n_cut; ++j) {
            cursor[j] = cursor[j - 1] + 1;
        }
    }

    for (std::size_t k = 0; k < n_cut; ++k) {
        lambda_buf[k] = grid[static_cast<std::size_t>(best_cursor[k])];
    }
    const auto ev = evaluate_candidate(pvalues, a, lambda_buf, alpha, cfg);
    affirm(ev.bh.tau == best_count,
           "re-run of the winning candidate changed the rejection count");
    return assemble(ev, alpha, scanned);
}

MultipleTestResult run_enhanced_test(std::span<const double> t,
                                     std::span<const double> a, double alpha,
                                     const GapConfig& cfg) {
    const auto pvalues = two_sided_pvalues(t);
    return run_enhanced_test_from_pvalues(pvalues, a, alpha, cfg);
}

} // namespace nettest
