#ifndef NETTEST_KERNELS_HPP
#define NETTEST_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops over the q links: per-link moments, studentized
// statistics, and normal-tail p-values. Each kernel ships as a scalar
// reference implementation and an AVX2 variant; the two perform the same
// floating-point operations in the same order per link, so their outputs are
// bit-identical and the dispatch choice never changes a result. The active
// variant is picked at runtime from CPU capabilities and can be overridden
// via force_backend() or the NETTEST_KERNELS environment variable
// ("scalar" or "avx2").

namespace nettest::kernels {

enum class Backend { scalar, avx2 };

// Per-link degeneracy flags produced by the studentize kernel.
inline constexpr std::uint8_t flag_degenerate = 1;     // v1 == 0 and v2 == 0
inline constexpr std::uint8_t flag_aux_degenerate = 2; // v1 == 0 or v2 == 0

struct Ops {
    // samples: n rows of q contiguous link values (sample-major).
    // mean[k] = sum_l samples[l][k] / n, var[k] = sum_l (x - mean)^2 / n.
    void (*link_moments)(const double* samples, std::size_t n, std::size_t q,
                         double* mean, double* var);

    // t = (m1-m2)/sqrt(v1/n1+v2/n2), kappa = n2*v1/(n1*v2),
    // a = (m1+kappa*m2)/sqrt(v1/n1+kappa^2*v2/n2); degenerate links get
    // t and/or a forced to zero and the corresponding flag set.
    void (*studentized)(const double* m1, const double* v1, double n1,
                        const double* m2, const double* v2, double n2,
                        std::size_t q, double* t, double* kappa, double* a,
                        std::uint8_t* flags);

    // p[k] = erfc(|t[k]|/sqrt(2)) = 2*(1 - Phi(|t[k]|)).
    void (*two_sided_tail)(const double* t, std::size_t q, double* p);
};

const Ops& active();
Backend active_backend();
void force_backend(Backend backend);
bool avx2_available();

// Single-value entry points (scalar implementation; bit-identical to what
// the vector kernels produce per lane).
double erfc_cody(double x);
double normal_sf(double x);  // 1 - Phi(x), evaluated in the tail
double normal_cdf(double x);
double two_sided_pvalue(double t);

} // namespace nettest::kernels

#endif // NETTEST_KERNELS_HPP
