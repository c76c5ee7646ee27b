// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 (never -mfma). Only reached through avx2_kernels()
// after a runtime CPU check, so this file must stay free of inline library
// code that could be shared with the baseline build.

#include "mbtvlc/simd/kernels.hpp"

#if defined(MBTVLC_HAVE_AVX2_TU)

#include <immintrin.h>

namespace mbtvlc::simd {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

inline __m256d negate(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }

inline double hsum(__m256d v)
{
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void leg_geometry(const ElementView& e, const double p[3], const double a[3], double* dist,
                  double* cos_elem, double* cos_axis)
{
    const __m256d px = _mm256_set1_pd(p[0]);
    const __m256d py = _mm256_set1_pd(p[1]);
    const __m256d pz = _mm256_set1_pd(p[2]);
    const __m256d ax = _mm256_set1_pd(a[0]);
    const __m256d ay = _mm256_set1_pd(a[1]);
    const __m256d az = _mm256_set1_pd(a[2]);
    std::size_t i = 0;
    for (; i + 4 <= e.n; i += 4) {
        const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(e.cx + i));
        const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(e.cy + i));
        const __m256d dz = _mm256_sub_pd(pz, _mm256_loadu_pd(e.cz + i));
        const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz)));
        const __m256d ne = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(e.nx + i), dx),
                          _mm256_mul_pd(_mm256_loadu_pd(e.ny + i), dy)),
            _mm256_mul_pd(_mm256_loadu_pd(e.nz + i), dz));
        const __m256d na = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ax, dx), _mm256_mul_pd(ay, dy)), _mm256_mul_pd(az, dz));
        _mm256_storeu_pd(dist + i, d);
        _mm256_storeu_pd(cos_elem + i, _mm256_div_pd(ne, d));
        _mm256_storeu_pd(cos_axis + i, _mm256_div_pd(negate(na), d));
    }
    if (i < e.n) {
        const ElementView tail{e.cx + i, e.cy + i, e.cz + i, e.nx + i, e.ny + i, e.nz + i, e.n - i};
        scalar_kernels().leg_geometry(tail, p, a, dist + i, cos_elem + i, cos_axis + i);
    }
}

void scaled_product(const double* a, const double* b, double s, double* out, std::size_t n)
{
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(ab, vs));
    }
    for (; i < n; ++i) {
        out[i] = (a[i] * b[i]) * s;
    }
}

void offset_sum(const double* a, const double* b, double s, double* out, std::size_t n)
{
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(ab, vs));
    }
    for (; i < n; ++i) {
        out[i] = (a[i] + b[i]) + s;
    }
}

double dot(const double* a, const double* b, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double total = hsum(acc);
    for (std::size_t i = full; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void window_split(const double* delay, const double* power, std::size_t n, double t_end,
                  double* inside, double* outside)
{
    const __m256d end = _mm256_set1_pd(t_end);
    __m256d in = _mm256_setzero_pd();
    __m256d out = _mm256_setzero_pd();
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        const __m256d p = _mm256_loadu_pd(power + i);
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(delay + i), end, _CMP_LT_OQ);
        in = _mm256_add_pd(in, _mm256_and_pd(mask, p));
        out = _mm256_add_pd(out, _mm256_andnot_pd(mask, p));
    }
    double total_in = hsum(in);
    double total_out = hsum(out);
    for (std::size_t i = full; i < n; ++i) {
        if (delay[i] < t_end) {
            total_in += power[i];
        } else {
            total_out += power[i];
        }
    }
    *inside = total_in;
    *outside = total_out;
}

// Taylor polynomials on |y| <= pi/4; truncation error below 5e-17.
inline __m256d sin_poly(__m256d y)
{
    const __m256d y2 = _mm256_mul_pd(y, y);
    __m256d s = _mm256_set1_pd(-1.0 / 1307674368000.0);
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(1.0 / 6227020800.0));
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(-1.0 / 39916800.0));
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(1.0 / 362880.0));
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(-1.0 / 5040.0));
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(1.0 / 120.0));
    s = _mm256_add_pd(_mm256_mul_pd(s, y2), _mm256_set1_pd(-1.0 / 6.0));
    return _mm256_add_pd(y, _mm256_mul_pd(_mm256_mul_pd(s, y2), y));
}

inline __m256d cos_poly(__m256d y)
{
    const __m256d y2 = _mm256_mul_pd(y, y);
    __m256d c = _mm256_set1_pd(1.0 / 20922789888000.0);
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(-1.0 / 87178291200.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(1.0 / 479001600.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(-1.0 / 3628800.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(1.0 / 40320.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(-1.0 / 720.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(1.0 / 24.0));
    c = _mm256_add_pd(_mm256_mul_pd(c, y2), _mm256_set1_pd(-0.5));
    return _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(c, y2));
}

// cos and sin of 2 pi x, reducing x to a quarter turn first.
inline void sincos_turns(__m256d x, __m256d* s_out, __m256d* c_out)
{
    constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
    const __m256d r4 = _mm256_mul_pd(_mm256_sub_pd(x, _mm256_round_pd(x, kNearest)),
                                     _mm256_set1_pd(4.0));
    const __m256d q = _mm256_round_pd(r4, kNearest);
    const __m256d y = _mm256_mul_pd(_mm256_sub_pd(r4, q), _mm256_set1_pd(kHalfPi));
    const __m256i q64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q64, one), one));
    const __m256d sneg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q64, two), two));
    const __m256d cneg = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q64, one), two), two));
    const __m256d s = sin_poly(y);
    const __m256d c = cos_poly(y);
    const __m256d sign = _mm256_set1_pd(-0.0);
    *s_out = _mm256_xor_pd(_mm256_blendv_pd(s, c, swap), _mm256_and_pd(sneg, sign));
    *c_out = _mm256_xor_pd(_mm256_blendv_pd(c, s, swap), _mm256_and_pd(cneg, sign));
}

void phasor_sum(const double* delay, const double* power, std::size_t n, double f, double* re,
                double* im)
{
    const __m256d vf = _mm256_set1_pd(f);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        __m256d s, c;
        sincos_turns(_mm256_mul_pd(vf, _mm256_loadu_pd(delay + i)), &s, &c);
        const __m256d p = _mm256_loadu_pd(power + i);
        acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(p, c));
        acc_im = _mm256_sub_pd(acc_im, _mm256_mul_pd(p, s));
    }
    double total_re = hsum(acc_re);
    double total_im = hsum(acc_im);
    if (full < n) {
        // Pad the tail into one more vector so it uses the same polynomial.
        alignas(32) double d4[4] = {0, 0, 0, 0};
        alignas(32) double p4[4] = {0, 0, 0, 0};
        for (std::size_t i = full; i < n; ++i) {
            d4[i - full] = delay[i];
            p4[i - full] = power[i];
        }
        __m256d s, c;
        sincos_turns(_mm256_mul_pd(vf, _mm256_load_pd(d4)), &s, &c);
        alignas(32) double cr[4];
        alignas(32) double sr[4];
        _mm256_store_pd(cr, _mm256_mul_pd(_mm256_load_pd(p4), c));
        _mm256_store_pd(sr, _mm256_mul_pd(_mm256_load_pd(p4), s));
        for (std::size_t j = 0; j < n - full; ++j) {
            total_re += cr[j];
            total_im -= sr[j];
        }
    }
    *re = total_re;
    *im = total_im;
}

}  // namespace

const KernelTable* avx2_kernels()
{
    static const KernelTable table{
        Isa::Avx2, leg_geometry, scaled_product, offset_sum, dot, window_split, phasor_sum,
    };
    return &table;
}

}  // namespace mbtvlc::simd

#else

namespace mbtvlc::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace mbtvlc::simd

#endif
