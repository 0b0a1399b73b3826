#ifndef NETTEST_KERNELS_CODY_CONSTANTS_HPP
#define NETTEST_KERNELS_CODY_CONSTANTS_HPP

// Coefficients of W. J. Cody's rational approximations for erf/erfc
// (netlib SPECFUN "calerf"), shared by the scalar and AVX2 kernels, plus the
// range-reduction constants of the exp() used inside the erfc tail factor.

namespace nettest::kernels::detail {

// |x| <= 0.46875: erf(x) = x * P_a(x^2) / Q_b(x^2)
inline constexpr double erf_a[5] = {
    3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
    3.20937758913846947e03, 1.85777706184603153e-1};
inline constexpr double erf_b[4] = {
    2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
    2.84423683343917062e03};

// 0.46875 < x <= 4: erfc(x) = exp(-x^2) * P_c(x) / Q_d(x)
inline constexpr double erfc_c[9] = {
    5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
    2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
    2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
inline constexpr double erfc_d[8] = {
    1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
    1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
    3.43936767414372164e03, 1.23033935480374942e03};

// x > 4: erfc(x) = exp(-x^2)/x * (1/sqrt(pi) - P_p(1/x^2)/Q_q(1/x^2)/x^2)
inline constexpr double erfc_p[6] = {
    3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
    1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
inline constexpr double erfc_q[5] = {
    2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
    6.05183413124413191e-2, 2.33520497626869185e-3};

inline constexpr double sqrt_pi_inv = 5.64189583547756287e-1;
inline constexpr double erf_thresh = 0.46875;
// erfc underflows to zero well before 28; clamping there keeps every
// intermediate finite without changing any representable result.
inline constexpr double erfc_xmax = 28.0;

// exp() range reduction: x = k*ln2 + r, |r| <= ln2/2, exp(x) = 2^k * exp(r),
// with exp(r) from a degree-13 Taylor polynomial (relative truncation error
// below 5e-18 on the reduced interval).
inline constexpr double exp_log2e = 1.44269504088896340736e0;
inline constexpr double exp_ln2_hi = 6.93147180369123816490e-1;
inline constexpr double exp_ln2_lo = 1.90821492927058770002e-10;
inline constexpr double exp_underflow = -708.0;
// 1/j! for j = 13 down to 2 (Horner tail ends with + 1, * r, + 1).
inline constexpr double exp_taylor[12] = {
    1.6059043836821614599e-10, 2.0876756987868098979e-9,
    2.5052108385441718775e-8,  2.7557319223985890653e-7,
    2.7557319223985892510e-6,  2.4801587301587301566e-5,
    1.9841269841269841253e-4,  1.3888888888888889419e-3,
    8.3333333333333332177e-3,  4.1666666666666664354e-2,
    1.6666666666666665741e-1,  5.0000000000000000000e-1};

} // namespace nettest::kernels::detail

#endif // NETTEST_KERNELS_CODY_CONSTANTS_HPP
