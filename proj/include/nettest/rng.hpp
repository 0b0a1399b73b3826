#ifndef NETTEST_RNG_HPP
#define NETTEST_RNG_HPP

#include <cstdint>
#include <cstddef>

namespace nettest {

// xoshiro256++ with splitmix64-derived state. Every distribution below is
// implemented in this library rather than delegated to <random>, so a given
// (seed, stream) pair produces the same draws on every build of the same
// binary. Streams are cheap: stream r of a master seed is an independent
// generator, which is what the replication loop uses to stay deterministic
// under any worker count.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    // Derive the generator for one replication of a master seed.
    static SplitRng for_replication(std::uint64_t master_seed, std::uint64_t replication) noexcept {
        return SplitRng(master_seed, replication + 1);
    }

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double prob) noexcept { return uniform01() < prob; }

    // Standard normal via the Marsaglia polar method.
    double normal() noexcept;

    // Gamma(shape, 1) via Marsaglia-Tsang; valid for any shape > 0.
    double gamma(double shape) noexcept;

    double chi_squared(double dof) noexcept { return 2.0 * gamma(0.5 * dof); }

    // Poisson with the given mean; exact (inversion-by-products for small
    // means, PTRS transformed rejection for large ones).
    long poisson(double mean) noexcept;

  private:
    std::uint64_t state_[4];
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 output function, also used for seed derivation.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

} // namespace nettest

#endif // NETTEST_RNG_HPP
