#pragma once

// SIMD lanes for the clear-sky row kernel: vectorized exp/log plus the fused
// Ineichen-Perez cell update. AVX-512 and AVX2 paths with a scalar fallback;
// all paths implement the same arithmetic as fastmath.hpp, and the
// grid-vs-scalar equivalence tests pin the agreement.

#include <cstdint>

#include "heliocast/fastmath.hpp"

#if defined(__AVX512F__)
#define HELIOCAST_SIMD_AVX512 1
#include <immintrin.h>
#elif defined(__AVX2__) && defined(__FMA__)
#define HELIOCAST_SIMD_AVX2 1
#include <immintrin.h>
#endif

namespace heliocast::simd {

struct SecantRowParams {
    double a_row;  // sin(lat) * sin(decl)
    double b_row;  // cos(lat) * cos(decl)
    double a_u;    // c_g2 * (f_h1 + f_h2*(TL-1)), uniform case
    double k_u;    // c_g1 * I0, uniform case
};

inline constexpr double kNightArg = -1400.0;  // forces the zero-flush select
inline constexpr double kNightEps = 1e-4;
inline constexpr double kFlushArg = -700.0;

/// One cell of the secant-air-mass clear-sky update (scalar reference lane,
/// also the tail handler for the vector paths).
inline double secant_cell(double cos_ha, double A, double K, const SecantRowParams& p) {
    double c = p.a_row + p.b_row * cos_ha;
    c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
    const bool night = c <= kNightEps;
    const double cc = night ? 1.0 : c;
    const double am = 1.0 / cc;
    const double u = fastmath::exp_unchecked(-1.8 * fastmath::log_unchecked(cc));
    double arg = -A * am + 0.01 * u;
    arg = night ? kNightArg : arg;
    const double ghi = K * c * fastmath::exp_unchecked(arg);
    return arg < kFlushArg ? 0.0 : (ghi < 0.0 ? 0.0 : ghi);
}

#if defined(HELIOCAST_SIMD_AVX512)

namespace detail {

// double(v) for integer lanes with |v| < 2^51, via the 1.5*2^52 trick
inline __m512d i64_to_pd(__m512i v) {
    const __m512i magic = _mm512_set1_epi64(0x4338000000000000LL);
    const __m512d shift = _mm512_set1_pd(0x1.8p52);
    return _mm512_sub_pd(_mm512_castsi512_pd(_mm512_add_epi64(v, magic)), shift);
}

// 1/b via rcp14 plus two Newton refinements (~2 ulp, pipelines better than
// vdivpd; the scalar engine uses true division and the equivalence tests
// bound the disagreement)
inline __m512d recip_fast(__m512d b) {
    const __m512d two = _mm512_set1_pd(2.0);
    __m512d r = _mm512_rcp14_pd(b);
    r = _mm512_mul_pd(r, _mm512_fnmadd_pd(b, r, two));
    r = _mm512_mul_pd(r, _mm512_fnmadd_pd(b, r, two));
    return r;
}

inline __m512d div_fast(__m512d a, __m512d b) { return _mm512_mul_pd(a, recip_fast(b)); }

/// exp over [-708, 710]; +inf via exponent-scale overflow above the
/// threshold. Clamp skipped when the caller guarantees the domain.
template <bool Clamp = true>
inline __m512d exp_pd(__m512d x) {
    if constexpr (Clamp) {
        x = _mm512_min_pd(_mm512_max_pd(x, _mm512_set1_pd(-708.0)), _mm512_set1_pd(710.0));
    }

    const __m512d inv_ln2 = _mm512_set1_pd(1.44269504088896340736);
    const __m512d ln2_hi = _mm512_set1_pd(6.93147180369123816490e-01);
    const __m512d ln2_lo = _mm512_set1_pd(1.90821492927058770002e-10);
    const __m512d shift = _mm512_set1_pd(0x1.8p52);

    __m512d kd = _mm512_fmadd_pd(x, inv_ln2, shift);
    const __m512i ki = _mm512_sub_epi64(_mm512_castpd_si512(kd), _mm512_castpd_si512(shift));
    kd = _mm512_sub_pd(kd, shift);

    __m512d r = _mm512_fnmadd_pd(kd, ln2_hi, x);
    r = _mm512_fnmadd_pd(kd, ln2_lo, r);

    // Taylor to r^12, Estrin form to keep the dependency chain shallow
    const __m512d r2 = _mm512_mul_pd(r, r);
    const __m512d r4 = _mm512_mul_pd(r2, r2);
    const __m512d r8 = _mm512_mul_pd(r4, r4);
    auto pair = [&](double c0, double c1) {
        return _mm512_fmadd_pd(_mm512_set1_pd(c1), r, _mm512_set1_pd(c0));
    };
    const __m512d q0 = _mm512_fmadd_pd(pair(1.0 / 2.0, 1.0 / 6.0), r2, pair(1.0, 1.0));
    const __m512d q1 =
        _mm512_fmadd_pd(pair(1.0 / 720.0, 1.0 / 5040.0), r2, pair(1.0 / 24.0, 1.0 / 120.0));
    const __m512d q2 = _mm512_fmadd_pd(pair(1.0 / 3628800.0, 1.0 / 39916800.0), r2,
                                       pair(1.0 / 40320.0, 1.0 / 362880.0));
    const __m512d q3 = _mm512_set1_pd(1.0 / 479001600.0);
    const __m512d p =
        _mm512_fmadd_pd(_mm512_fmadd_pd(q3, r4, q2), r8, _mm512_fmadd_pd(q1, r4, q0));

    // single power-of-two factor: exact, and k = 1024 (x > overflow cutoff)
    // lands on the inf bit pattern; k >= -1021 here so results stay normal
    const __m512i bias = _mm512_set1_epi64(1023);
    const __m512d s = _mm512_castsi512_pd(_mm512_slli_epi64(_mm512_add_epi64(ki, bias), 52));
    return _mm512_mul_pd(p, s);
}

inline __m512d log_pd(__m512d x) {
    const __m512i off = _mm512_set1_epi64(0x3FE6000000000000LL);
    const __m512i expo_mask = _mm512_set1_epi64(std::int64_t(0xFFF0000000000000ULL));

    const __m512i ix = _mm512_castpd_si512(x);
    const __m512i tmp = _mm512_sub_epi64(ix, off);
    const __m512i e = _mm512_srai_epi64(tmp, 52);
    const __m512d m =
        _mm512_castsi512_pd(_mm512_sub_epi64(ix, _mm512_and_si512(tmp, expo_mask)));

    const __m512d one = _mm512_set1_pd(1.0);
    const __m512d s = _mm512_mul_pd(_mm512_sub_pd(m, one), recip_fast(_mm512_add_pd(m, one)));
    const __m512d z = _mm512_mul_pd(s, s);

    // odd atanh series to s^15, Estrin over z (|s| <= 0.186 here, truncation
    // ~4e-14 absolute on ln m)
    const __m512d z2 = _mm512_mul_pd(z, z);
    const __m512d z4 = _mm512_mul_pd(z2, z2);
    auto pair = [&](double c0, double c1) {
        return _mm512_fmadd_pd(_mm512_set1_pd(c1), z, _mm512_set1_pd(c0));
    };
    const __m512d q0 = _mm512_fmadd_pd(pair(1.0 / 5.0, 1.0 / 7.0), z2, pair(1.0, 1.0 / 3.0));
    const __m512d q1 =
        _mm512_fmadd_pd(pair(1.0 / 13.0, 1.0 / 15.0), z2, pair(1.0 / 9.0, 1.0 / 11.0));
    const __m512d p = _mm512_fmadd_pd(q1, z4, q0);

    const __m512d lnm = _mm512_mul_pd(_mm512_mul_pd(_mm512_set1_pd(2.0), s), p);
    const __m512d ed = i64_to_pd(e);
    const __m512d ln2_hi = _mm512_set1_pd(6.93147180369123816490e-01);
    const __m512d ln2_lo = _mm512_set1_pd(1.90821492927058770002e-10);
    return _mm512_fmadd_pd(ed, ln2_hi, _mm512_fmadd_pd(ed, ln2_lo, lnm));
}

}  // namespace detail

template <bool Uniform>
inline void secant_row(const double* cos_ha, const double* a_cell, const double* k_cell,
                       double* out, int width, const SecantRowParams& prm) {
    const __m512d a_row = _mm512_set1_pd(prm.a_row);
    const __m512d b_row = _mm512_set1_pd(prm.b_row);
    const __m512d one = _mm512_set1_pd(1.0);
    const __m512d neg_one = _mm512_set1_pd(-1.0);
    const __m512d eps = _mm512_set1_pd(kNightEps);
    const __m512d night_arg = _mm512_set1_pd(kNightArg);
    const __m512d flush = _mm512_set1_pd(kFlushArg);
    const __m512d zero = _mm512_setzero_pd();
    const __m512d m18 = _mm512_set1_pd(-1.8);
    const __m512d c001 = _mm512_set1_pd(0.01);
    const __m512d a_un = _mm512_set1_pd(prm.a_u);
    const __m512d k_un = _mm512_set1_pd(prm.k_u);

    auto cell8 = [&](int j) {
        __m512d c = _mm512_fmadd_pd(b_row, _mm512_loadu_pd(cos_ha + j), a_row);
        c = _mm512_min_pd(_mm512_max_pd(c, neg_one), one);
        const __mmask8 night = _mm512_cmp_pd_mask(c, eps, _CMP_LE_OQ);
        const __m512d cc = _mm512_mask_blend_pd(night, c, one);
        const __m512d am = detail::recip_fast(cc);
        // -1.8*ln(cc) is bounded in [0, 16.6]: no clamp needed in the exp
        const __m512d u = detail::exp_pd<false>(_mm512_mul_pd(m18, detail::log_pd(cc)));
        const __m512d A = Uniform ? a_un : _mm512_loadu_pd(a_cell + j);
        const __m512d K = Uniform ? k_un : _mm512_loadu_pd(k_cell + j);
        __m512d arg = _mm512_fnmadd_pd(A, am, _mm512_mul_pd(c001, u));
        arg = _mm512_mask_blend_pd(night, arg, night_arg);
        const __m512d ghi = _mm512_mul_pd(_mm512_mul_pd(K, c), detail::exp_pd(arg));
        const __mmask8 flushed = _mm512_cmp_pd_mask(arg, flush, _CMP_LT_OQ);
        __m512d res = _mm512_max_pd(ghi, zero);
        res = _mm512_mask_blend_pd(flushed, res, zero);
        _mm512_storeu_pd(out + j, res);
    };
    int j = 0;
    // independent 8-lane updates per iteration overlap the poly chains
    for (; j + 32 <= width; j += 32) {
        cell8(j);
        cell8(j + 8);
        cell8(j + 16);
        cell8(j + 24);
    }
    for (; j + 8 <= width; j += 8) cell8(j);
    for (; j < width; ++j) {
        out[j] = secant_cell(cos_ha[j], Uniform ? prm.a_u : a_cell[j],
                             Uniform ? prm.k_u : k_cell[j], prm);
    }
}

#elif defined(HELIOCAST_SIMD_AVX2)

namespace detail {

inline __m256d i64_to_pd_small(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL);
    const __m256d shift = _mm256_set1_pd(0x1.8p52);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, magic)), shift);
}

// 1/b via a float-precision seed plus two Newton refinements
inline __m256d recip_fast(__m256d b) {
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d r = _mm256_cvtps_pd(_mm_rcp_ps(_mm256_cvtpd_ps(b)));
    r = _mm256_mul_pd(r, _mm256_fnmadd_pd(b, r, two));
    r = _mm256_mul_pd(r, _mm256_fnmadd_pd(b, r, two));
    return r;
}

template <bool Clamp = true>
inline __m256d exp_pd(__m256d x) {
    if constexpr (Clamp) {
        x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(710.0));
    }

    const __m256d inv_ln2 = _mm256_set1_pd(1.44269504088896340736);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d shift = _mm256_set1_pd(0x1.8p52);

    __m256d kd = _mm256_fmadd_pd(x, inv_ln2, shift);
    const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(kd), _mm256_castpd_si256(shift));
    kd = _mm256_sub_pd(kd, shift);

    __m256d r = _mm256_fnmadd_pd(kd, ln2_hi, x);
    r = _mm256_fnmadd_pd(kd, ln2_lo, r);

    const __m256d r2 = _mm256_mul_pd(r, r);
    const __m256d r4 = _mm256_mul_pd(r2, r2);
    const __m256d r8 = _mm256_mul_pd(r4, r4);
    auto pair = [&](double c0, double c1) {
        return _mm256_fmadd_pd(_mm256_set1_pd(c1), r, _mm256_set1_pd(c0));
    };
    const __m256d q0 = _mm256_fmadd_pd(pair(1.0 / 2.0, 1.0 / 6.0), r2, pair(1.0, 1.0));
    const __m256d q1 =
        _mm256_fmadd_pd(pair(1.0 / 720.0, 1.0 / 5040.0), r2, pair(1.0 / 24.0, 1.0 / 120.0));
    const __m256d q2 = _mm256_fmadd_pd(pair(1.0 / 3628800.0, 1.0 / 39916800.0), r2,
                                       pair(1.0 / 40320.0, 1.0 / 362880.0));
    const __m256d q3 = _mm256_set1_pd(1.0 / 479001600.0);
    const __m256d p =
        _mm256_fmadd_pd(_mm256_fmadd_pd(q3, r4, q2), r8, _mm256_fmadd_pd(q1, r4, q0));

    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d s = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, bias), 52));
    return _mm256_mul_pd(p, s);
}

inline __m256d log_pd(__m256d x) {
    const __m256i off = _mm256_set1_epi64x(0x3FE6000000000000LL);
    const __m256i expo_mask = _mm256_set1_epi64x(std::int64_t(0xFFF0000000000000ULL));

    const __m256i ix = _mm256_castpd_si256(x);
    const __m256i tmp = _mm256_sub_epi64(ix, off);
    // tmp >> 52 arithmetic: logical shift to a 12-bit value, then wrap
    const __m256i e12 = _mm256_srli_epi64(tmp, 52);
    __m256d ed = i64_to_pd_small(e12);  // in [0, 4095]
    const __m256d wrap =
        _mm256_and_pd(_mm256_cmp_pd(ed, _mm256_set1_pd(2047.5), _CMP_GT_OQ),
                      _mm256_set1_pd(4096.0));
    ed = _mm256_sub_pd(ed, wrap);
    const __m256d m =
        _mm256_castsi256_pd(_mm256_sub_epi64(ix, _mm256_and_si256(tmp, expo_mask)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_mul_pd(_mm256_sub_pd(m, one), recip_fast(_mm256_add_pd(m, one)));
    const __m256d z = _mm256_mul_pd(s, s);

    const __m256d z2 = _mm256_mul_pd(z, z);
    const __m256d z4 = _mm256_mul_pd(z2, z2);
    auto pair = [&](double c0, double c1) {
        return _mm256_fmadd_pd(_mm256_set1_pd(c1), z, _mm256_set1_pd(c0));
    };
    const __m256d q0 = _mm256_fmadd_pd(pair(1.0 / 5.0, 1.0 / 7.0), z2, pair(1.0, 1.0 / 3.0));
    const __m256d q1 =
        _mm256_fmadd_pd(pair(1.0 / 13.0, 1.0 / 15.0), z2, pair(1.0 / 9.0, 1.0 / 11.0));
    const __m256d p = _mm256_fmadd_pd(q1, z4, q0);

    const __m256d lnm = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), p);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_fmadd_pd(ed, ln2_hi, _mm256_fmadd_pd(ed, ln2_lo, lnm));
}

}  // namespace detail

template <bool Uniform>
inline void secant_row(const double* cos_ha, const double* a_cell, const double* k_cell,
                       double* out, int width, const SecantRowParams& prm) {
    const __m256d a_row = _mm256_set1_pd(prm.a_row);
    const __m256d b_row = _mm256_set1_pd(prm.b_row);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg_one = _mm256_set1_pd(-1.0);
    const __m256d eps = _mm256_set1_pd(kNightEps);
    const __m256d night_arg = _mm256_set1_pd(kNightArg);
    const __m256d flush = _mm256_set1_pd(kFlushArg);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d m18 = _mm256_set1_pd(-1.8);
    const __m256d c001 = _mm256_set1_pd(0.01);
    const __m256d a_un = _mm256_set1_pd(prm.a_u);
    const __m256d k_un = _mm256_set1_pd(prm.k_u);

    int j = 0;
    for (; j + 4 <= width; j += 4) {
        __m256d c = _mm256_fmadd_pd(b_row, _mm256_loadu_pd(cos_ha + j), a_row);
        c = _mm256_min_pd(_mm256_max_pd(c, neg_one), one);
        const __m256d night = _mm256_cmp_pd(c, eps, _CMP_LE_OQ);
        const __m256d cc = _mm256_blendv_pd(c, one, night);
        const __m256d am = detail::recip_fast(cc);
        const __m256d u = detail::exp_pd<false>(_mm256_mul_pd(m18, detail::log_pd(cc)));
        const __m256d A = Uniform ? a_un : _mm256_loadu_pd(a_cell + j);
        const __m256d K = Uniform ? k_un : _mm256_loadu_pd(k_cell + j);
        __m256d arg = _mm256_fnmadd_pd(A, am, _mm256_mul_pd(c001, u));
        arg = _mm256_blendv_pd(arg, night_arg, night);
        const __m256d ghi = _mm256_mul_pd(_mm256_mul_pd(K, c), detail::exp_pd(arg));
        const __m256d flushed = _mm256_cmp_pd(arg, flush, _CMP_LT_OQ);
        __m256d res = _mm256_max_pd(ghi, zero);
        res = _mm256_blendv_pd(res, zero, flushed);
        _mm256_storeu_pd(out + j, res);
    }
    for (; j < width; ++j) {
        out[j] = secant_cell(cos_ha[j], Uniform ? prm.a_u : a_cell[j],
                             Uniform ? prm.k_u : k_cell[j], prm);
    }
}

#else

template <bool Uniform>
inline void secant_row(const double* cos_ha, const double* a_cell, const double* k_cell,
                       double* out, int width, const SecantRowParams& prm) {
    for (int j = 0; j < width; ++j) {
        out[j] = secant_cell(cos_ha[j], Uniform ? prm.a_u : a_cell[j],
                             Uniform ? prm.k_u : k_cell[j], prm);
    }
}

#endif

}  // namespace heliocast::simd
