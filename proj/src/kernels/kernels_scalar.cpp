// Scalar reference kernels. The AVX2 variants in kernels_avx2.cpp perform the
// same operations in the same order per link; keep the two files in sync.

#include "nettest/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

#include "cody_constants.hpp"

namespace nettest::kernels {

namespace {

using namespace detail;

// exp on [-750, 1]; flushes to zero below exp_underflow.
inline double nt_exp(double x) {
    if (x < exp_underflow) return 0.0;
    const double kd = std::nearbyint(x * exp_log2e);
    double r = x - kd * exp_ln2_hi;
    r -= kd * exp_ln2_lo;
    double poly = exp_taylor[0];
    for (int j = 1; j < 12; ++j) poly = poly * r + exp_taylor[j];
    poly = poly * r + 1.0;
    poly = poly * r + 1.0;
    // 2^k via exponent bits; k+1023 stays positive on this domain.
    const double biased = kd + (0x1.0p52 + 1023.0);
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(biased);
    const double scale =
        std::bit_cast<double>((bits & 0xFFFFFFFFFFFFFULL) << 52);
    return poly * scale;
}

inline double erfc_impl(double x) {
    double y = std::fabs(x);
    if (y > erfc_xmax) y = erfc_xmax;
    if (y <= erf_thresh) {
        const double z = y * y;
        double num = erf_a[4] * z;
        double den = z;
        num = (num + erf_a[0]) * z;
        den = (den + erf_b[0]) * z;
        num = (num + erf_a[1]) * z;
        den = (den + erf_b[1]) * z;
        num = (num + erf_a[2]) * z;
        den = (den + erf_b[2]) * z;
        const double erf_val = x * ((num + erf_a[3]) / (den + erf_b[3]));
        return 1.0 - erf_val;
    }
    double rat;
    if (y <= 4.0) {
        double num = erfc_c[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + erfc_c[i]) * y;
            den = (den + erfc_d[i]) * y;
        }
        rat = (num + erfc_c[7]) / (den + erfc_d[7]);
    } else {
        const double z = 1.0 / (y * y);
        double num = erfc_p[5] * z;
        double den = z;
        for (int i = 0; i < 4; ++i) {
            num = (num + erfc_p[i]) * z;
            den = (den + erfc_q[i]) * z;
        }
        const double frac = z * ((num + erfc_p[4]) / (den + erfc_q[4]));
        rat = (sqrt_pi_inv - frac) / y;
    }
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    const double res = (nt_exp(-ysq * ysq) * nt_exp(-del)) * rat;
    return x < 0.0 ? 2.0 - res : res;
}

constexpr double inv_sqrt2 = 0.70710678118654752440;

} // namespace

double erfc_cody(double x) { return erfc_impl(x); }

double normal_sf(double x) { return 0.5 * erfc_impl(x * inv_sqrt2); }

double normal_cdf(double x) { return 0.5 * erfc_impl(-x * inv_sqrt2); }

double two_sided_pvalue(double t) {
    return erfc_impl(std::fabs(t) * inv_sqrt2);
}

void link_moments_scalar(const double* samples, std::size_t n, std::size_t q,
                         double* mean, double* var) {
    for (std::size_t k = 0; k < q; ++k) mean[k] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = samples + l * q;
        for (std::size_t k = 0; k < q; ++k) mean[k] += row[k];
    }
    const double inv_n = static_cast<double>(n);
    for (std::size_t k = 0; k < q; ++k) mean[k] /= inv_n;
    for (std::size_t k = 0; k < q; ++k) var[k] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = samples + l * q;
        for (std::size_t k = 0; k < q; ++k) {
            const double d = row[k] - mean[k];
            var[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < q; ++k) var[k] /= inv_n;
}

void studentized_scalar(const double* m1, const double* v1, double n1,
                        const double* m2, const double* v2, double n2,
                        std::size_t q, double* t, double* kappa, double* a,
                        std::uint8_t* flags) {
    for (std::size_t k = 0; k < q; ++k) {
        const double w = m1[k] - m2[k];
        const double se2 = v1[k] / n1 + v2[k] / n2;
        const double t_raw = w / std::sqrt(se2);
        const double kap = (n2 * v1[k]) / (n1 * v2[k]);
        const double a_den = std::sqrt(v1[k] / n1 + (kap * kap) * (v2[k] / n2));
        const double a_raw = (m1[k] + kap * m2[k]) / a_den;
        const bool z1 = v1[k] == 0.0;
        const bool z2 = v2[k] == 0.0;
        const bool deg = z1 && z2;
        const bool aux = z1 || z2;
        t[k] = deg ? 0.0 : t_raw;
        kappa[k] = aux ? 0.0 : kap;
        a[k] = aux ? 0.0 : a_raw;
        flags[k] = static_cast<std::uint8_t>((deg ? flag_degenerate : 0) |
                                             (aux ? flag_aux_degenerate : 0));
    }
}

void two_sided_tail_scalar(const double* t, std::size_t q, double* p) {
    for (std::size_t k = 0; k < q; ++k) {
        p[k] = erfc_impl(std::fabs(t[k]) * inv_sqrt2);
    }
}

} // namespace nettest::kernels
