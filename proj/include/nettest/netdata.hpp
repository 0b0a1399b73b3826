#ifndef NETTEST_NETDATA_HPP
#define NETTEST_NETDATA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nettest {

// Bijection between node pairs {(i,j) : 0 <= i < j < p} and flat link
// indices {0, ..., q-1}, ordered row-major over i < j. This flat order is
// the canonical link order used everywhere: statistics vectors, the binary
// file format, and reported link tables all follow it. Diagonal entries are
// never indexed; self-loops are not hypotheses.
class LinkIndexMap {
  public:
    explicit LinkIndexMap(int p);

    int p() const { return p_; }
    std::size_t q() const { return pairs_.size(); }

    std::size_t flatten(int i, int j) const;
    std::pair<int, int> unflatten(std::size_t k) const;

  private:
    int p_;
    std::vector<std::size_t> row_offset_;
    std::vector<std::pair<int, int>> pairs_;
};

// One group's sample of symmetric networks: n matrices of dimension p x p.
// Instances are immutable once built and safe to share across threads.
// Construction canonicalizes: the diagonal is zeroed (never tested) and the
// matrix is exactly symmetric.
class NetworkSampleStack {
  public:
    // Validating factory for externally supplied matrices (each p*p
    // row-major). Entries must be finite, matrices square and of equal
    // dimension, and symmetric within `tolerance` in absolute terms; the
    // result is symmetrized as (M + M^T)/2.
    static NetworkSampleStack from_matrices(
        int group_id, int p, const std::vector<std::vector<double>>& matrices,
        double tolerance = 1e-9);

    // Factory for data that is symmetric by construction: n rows of the q
    // upper-triangular link values in canonical flat order.
    static NetworkSampleStack from_links(int group_id, int p,
                                         const std::vector<double>& link_rows,
                                         std::size_t n);

    int group_id() const { return group_id_; }
    int p() const { return p_; }
    int n() const { return n_; }

    std::span<const double> sample(int l) const {
        return {data_.data() + static_cast<std::size_t>(l) * p_ * p_,
                static_cast<std::size_t>(p_) * p_};
    }
    double at(int l, int i, int j) const {
        return data_[(static_cast<std::size_t>(l) * p_ + i) * p_ + j];
    }

  private:
    NetworkSampleStack(int group_id, int p, int n, std::vector<double> data)
        : group_id_(group_id), p_(p), n_(n), data_(std::move(data)) {}

    int group_id_;
    int p_;
    int n_;
    std::vector<double> data_; // n * p * p, row-major per sample
};

// Upper-triangular (off-diagonal) entries of one symmetric matrix in
// canonical flat order.
std::vector<double> flatten_upper(std::span<const double> matrix,
                                  const LinkIndexMap& map);

// All samples flattened, n rows of q links each (the layout the statistics
// kernels consume).
std::vector<double> sample_major_links(const NetworkSampleStack& stack,
                                       const LinkIndexMap& map);

enum class StackFormat { csv, binary };

// csv: `path` is a manifest file listing one per-sample CSV path per line
// (relative to the manifest's directory, or absolute). Each CSV holds p rows
// of p comma-separated values.
// binary: magic "NTST", version byte 1, p and n as u32 little-endian, then
// n records of q float64 little-endian link values in canonical order.
// The binary round trip is bit-exact.
NetworkSampleStack load_stack(const std::string& path, StackFormat format,
                              int group_id = 1);
void write_stack(const NetworkSampleStack& stack, const std::string& path,
                 StackFormat format);

} // namespace nettest

#endif // NETTEST_NETDATA_HPP
