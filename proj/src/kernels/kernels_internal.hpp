#ifndef NETTEST_KERNELS_INTERNAL_HPP
#define NETTEST_KERNELS_INTERNAL_HPP

#include <cstddef>
#include <cstdint>

namespace nettest::kernels {

void link_moments_scalar(const double* samples, std::size_t n, std::size_t q,
                         double* mean, double* var);
void studentized_scalar(const double* m1, const double* v1, double n1,
                        const double* m2, const double* v2, double n2,
                        std::size_t q, double* t, double* kappa, double* a,
                        std::uint8_t* flags);
void two_sided_tail_scalar(const double* t, std::size_t q, double* p);

#ifdef NETTEST_HAVE_AVX2
void link_moments_avx2(const double* samples, std::size_t n, std::size_t q,
                       double* mean, double* var);
void studentized_avx2(const double* m1, const double* v1, double n1,
                      const double* m2, const double* v2, double n2,
                      std::size_t q, double* t, double* kappa, double* a,
                      std::uint8_t* flags);
void two_sided_tail_avx2(const double* t, std::size_t q, double* p);
#endif

} // namespace nettest::kernels

#endif // NETTEST_KERNELS_INTERNAL_HPP
