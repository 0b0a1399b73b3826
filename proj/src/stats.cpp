#include "nettest/stats.hpp"

#include "nettest/errors.hpp"
#include "nettest/kernels.hpp"

namespace nettest {

namespace {

LinkSummaries summaries_from_flat(std::span<const double> links1, int n1,
                                  std::span<const double> links2, int n2,
                                  std::size_t q) {
    require(n1 >= 2 && n2 >= 2, "each group needs at least 2 samples");
    affirm(links1.size() == static_cast<std::size_t>(n1) * q &&
               links2.size() == static_cast<std::size_t>(n2) * q,
           "flattened link buffer size mismatch");
    LinkSummaries s;
    s.q = q;
    s.n1 = n1;
    s.n2 = n2;
    s.mean1.resize(q);
    s.mean2.resize(q);
    s.v1.resize(q);
    s.v2.resize(q);
    s.w.resize(q);
    const auto& ops = kernels::active();
    ops.link_moments(links1.data(), static_cast<std::size_t>(n1), q,
                     s.mean1.data(), s.v1.data());
    ops.link_moments(links2.data(), static_cast<std::size_t>(n2), q,
                     s.mean2.data(), s.v2.data());
    for (std::size_t k = 0; k < q; ++k) s.w[k] = s.mean1[k] - s.mean2[k];
    return s;
}

struct Studentized {
    std::vector<double> t, kappa, a;
    std::vector<std::uint8_t> flags;
};

Studentized studentize(const LinkSummaries& s) {
    Studentized out;
    out.t.resize(s.q);
    out.kappa.resize(s.q);
    out.a.resize(s.q);
    out.flags.resize(s.q);
    kernels::active().studentized(s.mean1.data(), s.v1.data(),
                                  static_cast<double>(s.n1), s.mean2.data(),
                                  s.v2.data(), static_cast<double>(s.n2), s.q,
                                  out.t.data(), out.kappa.data(),
                                  out.a.data(), out.flags.data());
    for (std::size_t k = 0; k < s.q; ++k) {
        if ((out.flags[k] & kernels::flag_degenerate) && s.w[k] != 0.0) {
            throw InvariantError(
                "link " + std::to_string(k) +
                " has zero variances but a nonzero mean difference");
        }
    }
    return out;
}

} // namespace

LinkSummaries link_summaries(const NetworkSampleStack& stack1,
                             const NetworkSampleStack& stack2) {
    require(stack1.p() == stack2.p(),
            "stacks have mismatched node counts (" +
                std::to_string(stack1.p()) + " vs " +
                std::to_string(stack2.p()) + ")");
    const LinkIndexMap map(stack1.p());
    const auto flat1 = sample_major_links(stack1, map);
    const auto flat2 = sample_major_links(stack2, map);
    return summaries_from_flat(flat1, stack1.n(), flat2, stack2.n(), map.q());
}

std::vector<double> test_statistics(const LinkSummaries& s) {
    return studentize(s).t;
}

AuxiliaryStatistics auxiliary_statistics(const LinkSummaries& s) {
    auto st = studentize(s);
    return {std::move(st.kappa), std::move(st.a), std::move(st.flags)};
}

std::vector<double> two_sided_pvalues(std::span<const double> t) {
    std::vector<double> p(t.size());
    kernels::active().two_sided_tail(t.data(), t.size(), p.data());
    return p;
}

LinkStatistics compute_link_statistics_flat(std::span<const double> links1,
                                            int n1,
                                            std::span<const double> links2,
                                            int n2, std::size_t q) {
    auto s = summaries_from_flat(links1, n1, links2, n2, q);
    auto st = studentize(s);
    LinkStatistics out;
    out.q = q;
    out.n1 = n1;
    out.n2 = n2;
    out.w = std::move(s.w);
    out.v1 = std::move(s.v1);
    out.v2 = std::move(s.v2);
    out.pvalue = two_sided_pvalues(st.t);
    out.t = std::move(st.t);
    out.kappa_hat = std::move(st.kappa);
    out.a = std::move(st.a);
    out.flags = std::move(st.flags);
    return out;
}

LinkStatistics compute_link_statistics(const NetworkSampleStack& stack1,
                                       const NetworkSampleStack& stack2) {
    require(stack1.p() == stack2.p(),
            "stacks have mismatched node counts (" +
                std::to_string(stack1.p()) + " vs " +
                std::to_string(stack2.p()) + ")");
    const LinkIndexMap map(stack1.p());
    const auto flat1 = sample_major_links(stack1, map);
    const auto flat2 = sample_major_links(stack2, map);
    return compute_link_statistics_flat(flat1, stack1.n(), flat2, stack2.n(),
                                        map.q());
}

} // namespace nettest
