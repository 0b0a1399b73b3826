// AVX2 kernel variants. Mirrors kernels_scalar.cpp operation for operation:
// every lane performs the scalar sequence, so outputs are bit-identical.
// Compiled with -mavx2 -ffp-contract=off; only dispatch.cpp calls in here,
// and only after the CPU check.

#include "nettest/kernels.hpp"

#ifdef NETTEST_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "cody_constants.hpp"
#include "kernels_internal.hpp"

namespace nettest::kernels {

namespace {

using namespace detail;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

const __m256d k_one = set1(1.0);
const __m256d k_sign = set1(-0.0);

inline __m256d vneg(__m256d v) { return _mm256_xor_pd(v, k_sign); }

inline __m256d vexp(__m256d x) {
    const __m256d kd = _mm256_round_pd(
        _mm256_mul_pd(x, set1(exp_log2e)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(kd, set1(exp_ln2_hi)));
    r = _mm256_sub_pd(r, _mm256_mul_pd(kd, set1(exp_ln2_lo)));
    __m256d poly = set1(exp_taylor[0]);
    for (int j = 1; j < 12; ++j) {
        poly = _mm256_add_pd(_mm256_mul_pd(poly, r), set1(exp_taylor[j]));
    }
    poly = _mm256_add_pd(_mm256_mul_pd(poly, r), k_one);
    poly = _mm256_add_pd(_mm256_mul_pd(poly, r), k_one);
    const __m256d biased = _mm256_add_pd(kd, set1(0x1.0p52 + 1023.0));
    const __m256i bits = _mm256_castpd_si256(biased);
    const __m256i ebits = _mm256_slli_epi64(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0xFFFFFFFFFFFFFLL)), 52);
    const __m256d res = _mm256_mul_pd(poly, _mm256_castsi256_pd(ebits));
    const __m256d under = _mm256_cmp_pd(x, set1(exp_underflow), _CMP_LT_OQ);
    return _mm256_andnot_pd(under, res);
}

inline __m256d verfc(__m256d x) {
    __m256d y = _mm256_andnot_pd(k_sign, x);
    y = _mm256_min_pd(y, set1(erfc_xmax));

    // |x| <= 0.46875
    const __m256d z = _mm256_mul_pd(y, y);
    __m256d num1 = _mm256_mul_pd(set1(erf_a[4]), z);
    __m256d den1 = z;
    for (int i = 0; i < 3; ++i) {
        num1 = _mm256_mul_pd(_mm256_add_pd(num1, set1(erf_a[i])), z);
        den1 = _mm256_mul_pd(_mm256_add_pd(den1, set1(erf_b[i])), z);
    }
    const __m256d erf_val = _mm256_mul_pd(
        x, _mm256_div_pd(_mm256_add_pd(num1, set1(erf_a[3])),
                         _mm256_add_pd(den1, set1(erf_b[3]))));
    const __m256d res1 = _mm256_sub_pd(k_one, erf_val);

    // 0.46875 < |x| <= 4
    __m256d num2 = _mm256_mul_pd(set1(erfc_c[8]), y);
    __m256d den2 = y;
    for (int i = 0; i < 7; ++i) {
        num2 = _mm256_mul_pd(_mm256_add_pd(num2, set1(erfc_c[i])), y);
        den2 = _mm256_mul_pd(_mm256_add_pd(den2, set1(erfc_d[i])), y);
    }
    const __m256d rat2 = _mm256_div_pd(_mm256_add_pd(num2, set1(erfc_c[7])),
                                       _mm256_add_pd(den2, set1(erfc_d[7])));

    // |x| > 4
    const __m256d zi = _mm256_div_pd(k_one, _mm256_mul_pd(y, y));
    __m256d num3 = _mm256_mul_pd(set1(erfc_p[5]), zi);
    __m256d den3 = zi;
    for (int i = 0; i < 4; ++i) {
        num3 = _mm256_mul_pd(_mm256_add_pd(num3, set1(erfc_p[i])), zi);
        den3 = _mm256_mul_pd(_mm256_add_pd(den3, set1(erfc_q[i])), zi);
    }
    const __m256d frac = _mm256_mul_pd(
        zi, _mm256_div_pd(_mm256_add_pd(num3, set1(erfc_p[4])),
                          _mm256_add_pd(den3, set1(erfc_q[4]))));
    const __m256d rat3 =
        _mm256_div_pd(_mm256_sub_pd(set1(sqrt_pi_inv), frac), y);

    const __m256d use3 = _mm256_cmp_pd(y, set1(4.0), _CMP_GT_OQ);
    const __m256d rat = _mm256_blendv_pd(rat2, rat3, use3);

    const __m256d ysq = _mm256_div_pd(
        _mm256_round_pd(_mm256_mul_pd(y, set1(16.0)),
                        _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC),
        set1(16.0));
    const __m256d del =
        _mm256_mul_pd(_mm256_sub_pd(y, ysq), _mm256_add_pd(y, ysq));
    const __m256d efac = _mm256_mul_pd(vexp(vneg(_mm256_mul_pd(ysq, ysq))),
                                       vexp(vneg(del)));
    __m256d res23 = _mm256_mul_pd(efac, rat);
    const __m256d xneg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    res23 = _mm256_blendv_pd(res23, _mm256_sub_pd(set1(2.0), res23), xneg);

    const __m256d use1 = _mm256_cmp_pd(y, set1(erf_thresh), _CMP_LE_OQ);
    return _mm256_blendv_pd(res23, res1, use1);
}

constexpr double inv_sqrt2 = 0.70710678118654752440;

} // namespace

void link_moments_avx2(const double* samples, std::size_t n, std::size_t q,
                       double* mean, double* var) {
    for (std::size_t k = 0; k < q; ++k) mean[k] = 0.0;
    const std::size_t qv = q - q % 4;
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = samples + l * q;
        for (std::size_t k = 0; k < qv; k += 4) {
            _mm256_storeu_pd(mean + k,
                             _mm256_add_pd(_mm256_loadu_pd(mean + k),
                                           _mm256_loadu_pd(row + k)));
        }
        for (std::size_t k = qv; k < q; ++k) mean[k] += row[k];
    }
    const double nd = static_cast<double>(n);
    const __m256d vn = set1(nd);
    for (std::size_t k = 0; k < qv; k += 4) {
        _mm256_storeu_pd(mean + k,
                         _mm256_div_pd(_mm256_loadu_pd(mean + k), vn));
    }
    for (std::size_t k = qv; k < q; ++k) mean[k] /= nd;

    for (std::size_t k = 0; k < q; ++k) var[k] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = samples + l * q;
        for (std::size_t k = 0; k < qv; k += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + k),
                                            _mm256_loadu_pd(mean + k));
            _mm256_storeu_pd(var + k, _mm256_add_pd(_mm256_loadu_pd(var + k),
                                                    _mm256_mul_pd(d, d)));
        }
        for (std::size_t k = qv; k < q; ++k) {
            const double d = row[k] - mean[k];
            var[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < qv; k += 4) {
        _mm256_storeu_pd(var + k, _mm256_div_pd(_mm256_loadu_pd(var + k), vn));
    }
    for (std::size_t k = qv; k < q; ++k) var[k] /= nd;
}

void studentized_avx2(const double* m1, const double* v1, double n1,
                      const double* m2, const double* v2, double n2,
                      std::size_t q, double* t, double* kappa, double* a,
                      std::uint8_t* flags) {
    const __m256d vn1 = set1(n1);
    const __m256d vn2 = set1(n2);
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t qv = q - q % 4;
    for (std::size_t k = 0; k < qv; k += 4) {
        const __m256d a1 = _mm256_loadu_pd(m1 + k);
        const __m256d a2 = _mm256_loadu_pd(m2 + k);
        const __m256d s1 = _mm256_loadu_pd(v1 + k);
        const __m256d s2 = _mm256_loadu_pd(v2 + k);
        const __m256d w = _mm256_sub_pd(a1, a2);
        const __m256d se2 =
            _mm256_add_pd(_mm256_div_pd(s1, vn1), _mm256_div_pd(s2, vn2));
        const __m256d t_raw = _mm256_div_pd(w, _mm256_sqrt_pd(se2));
        const __m256d kap = _mm256_div_pd(_mm256_mul_pd(vn2, s1),
                                          _mm256_mul_pd(vn1, s2));
        const __m256d a_den = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_div_pd(s1, vn1),
            _mm256_mul_pd(_mm256_mul_pd(kap, kap), _mm256_div_pd(s2, vn2))));
        const __m256d a_raw = _mm256_div_pd(
            _mm256_add_pd(a1, _mm256_mul_pd(kap, a2)), a_den);
        const __m256d z1 = _mm256_cmp_pd(s1, zero, _CMP_EQ_OQ);
        const __m256d z2 = _mm256_cmp_pd(s2, zero, _CMP_EQ_OQ);
        const __m256d deg = _mm256_and_pd(z1, z2);
        const __m256d aux = _mm256_or_pd(z1, z2);
        _mm256_storeu_pd(t + k, _mm256_andnot_pd(deg, t_raw));
        _mm256_storeu_pd(kappa + k, _mm256_andnot_pd(aux, kap));
        _mm256_storeu_pd(a + k, _mm256_andnot_pd(aux, a_raw));
        const int degm = _mm256_movemask_pd(deg);
        const int auxm = _mm256_movemask_pd(aux);
        for (int lane = 0; lane < 4; ++lane) {
            flags[k + lane] = static_cast<std::uint8_t>(
                (((degm >> lane) & 1) ? flag_degenerate : 0) |
                (((auxm >> lane) & 1) ? flag_aux_degenerate : 0));
        }
    }
    if (qv < q) {
        studentized_scalar(m1 + qv, v1 + qv, n1, m2 + qv, v2 + qv, n2, q - qv,
                           t + qv, kappa + qv, a + qv, flags + qv);
    }
}

void two_sided_tail_avx2(const double* t, std::size_t q, double* p) {
    const std::size_t qv = q - q % 4;
    const __m256d scale = set1(inv_sqrt2);
    for (std::size_t k = 0; k < qv; k += 4) {
        const __m256d at = _mm256_andnot_pd(k_sign, _mm256_loadu_pd(t + k));
        _mm256_storeu_pd(p + k, verfc(_mm256_mul_pd(at, scale)));
    }
    for (std::size_t k = qv; k < q; ++k) {
        p[k] = erfc_cody(std::fabs(t[k]) * inv_sqrt2);
    }
}

} // namespace nettest::kernels

#endif // NETTEST_HAVE_AVX2
