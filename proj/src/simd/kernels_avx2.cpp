// AVX2 + FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatcher.

#include "surrokit/simd.hpp"

#if SURROKIT_X86_64

#include <cmath>
#include <cstdint>
#include <immintrin.h>
#include <limits>

namespace surrokit::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_copy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = alpha * x[i];
}

double weighted_sqdist(const double* a, const double* b, const double* w,
                       std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(w + i), acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out += d * d * w[i];
    }
    return out;
}

void vrelu(const double* x, double* y, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d pos = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(y + i, _mm256_and_pd(v, pos));
    }
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// ---------------------------------------------------------------------------
// exp: argument reduction x = n*ln2 + r, |r| <= ln2/2, then a degree-13
// Taylor polynomial for exp(r) and reconstruction by exponent injection.
// The 2^n scale is applied as two half-sized factors so that results in the
// subnormal range still come out right.
// ---------------------------------------------------------------------------

namespace {

constexpr double kLog2E = 1.44269504088896340736;
constexpr double kLn2Hi = 6.93147180369123816490e-01; // 33 high bits of ln2
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kExpOverflow = 709.782712893384;
constexpr double kExpUnderflow = -745.133219101941;

inline __m256d exp_poly(__m256d r) {
    // Taylor coefficients 1/k!, k = 13 .. 2; remainder < 1 ulp on |r|<=0.347.
    __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868099e-09));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441720e-08));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985891e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985888e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587302e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333332e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    return p;
}

inline __m256d pow2(__m128i e32) {
    const __m256i e64 = _mm256_cvtepi32_epi64(e32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(e64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

inline __m256d exp4(__m256d x) {
    const __m256d nf = _mm256_round_pd(
        _mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(nf, _mm256_set1_pd(kLn2Lo), r);

    const __m128i n32 = _mm256_cvtpd_epi32(nf);
    const __m128i n1 = _mm_srai_epi32(n32, 1);
    const __m128i n2 = _mm_sub_epi32(n32, n1);

    __m256d result =
        _mm256_mul_pd(_mm256_mul_pd(exp_poly(r), pow2(n1)), pow2(n2));

    const __m256d over =
        _mm256_cmp_pd(x, _mm256_set1_pd(kExpOverflow), _CMP_GT_OQ);
    const __m256d under =
        _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ);
    const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    result = _mm256_blendv_pd(
        result, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
    result = _mm256_andnot_pd(under, result);
    result = _mm256_blendv_pd(result, _mm256_add_pd(x, x), nan);
    return result;
}

} // namespace

void vexp(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
    if (i < n) {
        // Padded tail through the same vector path, so a value never
        // depends on its position in the array.
        double buf[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = i; k < n; ++k) buf[k - i] = x[k];
        _mm256_storeu_pd(buf, exp4(_mm256_loadu_pd(buf)));
        for (std::size_t k = i; k < n; ++k) y[k] = buf[k - i];
    }
}

// ---------------------------------------------------------------------------
// sin/cos: Cody-Waite reduction by pi/2 with the fdlibm constant split,
// valid while the reduction quotient stays below 2^20. Larger arguments
// (|x| > 1e6) and NaN take the libm path lane by lane.
// ---------------------------------------------------------------------------

namespace {

constexpr double kInvPio2 = 6.36619772367581382433e-01;
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Lo = 6.07710050650619224932e-11;
constexpr double kTrigMax = 1.0e6;

// sin on |r| <= pi/4 (fdlibm kernel polynomial), s = r*r
inline __m256d sin_poly(__m256d r, __m256d s) {
    __m256d w = _mm256_set1_pd(1.58969099521155010221e-10);
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(-2.50507602534068634195e-08));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(2.75573137070700676789e-06));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(-1.98412698298579493134e-04));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(8.33333333332248946124e-03));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(-1.66666666666666324348e-01));
    return _mm256_fmadd_pd(_mm256_mul_pd(r, s), w, r);
}

// cos on |r| <= pi/4 (fdlibm kernel polynomial), s = r*r
inline __m256d cos_poly(__m256d s) {
    __m256d w = _mm256_set1_pd(-1.13596475577881948265e-11);
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(2.08757232129817482790e-09));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(-2.75573143513906633035e-07));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(2.48015872894767294178e-05));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(-1.38888888888741095749e-03));
    w = _mm256_fmadd_pd(w, s, _mm256_set1_pd(4.16666666666666019037e-02));
    const __m256d one_minus_hs =
        _mm256_fnmadd_pd(_mm256_set1_pd(0.5), s, _mm256_set1_pd(1.0));
    return _mm256_fmadd_pd(_mm256_mul_pd(s, s), w, one_minus_hs);
}

struct TrigEval {
    __m256d sin_part;
    __m256d cos_part;
    __m256i quad64;
};

inline TrigEval reduce_and_eval(__m256d x) {
    const __m256d jf = _mm256_round_pd(
        _mm256_mul_pd(x, _mm256_set1_pd(kInvPio2)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(jf, _mm256_set1_pd(kPio2Hi), x);
    r = _mm256_fnmadd_pd(jf, _mm256_set1_pd(kPio2Lo), r);

    TrigEval eval;
    eval.quad64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(jf));
    const __m256d s = _mm256_mul_pd(r, r);
    eval.sin_part = sin_poly(r, s);
    eval.cos_part = cos_poly(s);
    return eval;
}

inline __m256d select_odd(__m256i quad64, __m256d even_val, __m256d odd_val) {
    const __m256i odd = _mm256_and_si256(quad64, _mm256_set1_epi64x(1));
    const __m256d mask =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(odd, _mm256_set1_epi64x(1)));
    return _mm256_blendv_pd(even_val, odd_val, mask);
}

inline __m256d negate_where_bit2(__m256d value, __m256i q) {
    const __m256i flip = _mm256_cmpeq_epi64(
        _mm256_and_si256(q, _mm256_set1_epi64x(2)), _mm256_set1_epi64x(2));
    const __m256d sign =
        _mm256_and_pd(_mm256_castsi256_pd(flip), _mm256_set1_pd(-0.0));
    return _mm256_xor_pd(value, sign);
}

inline int huge_lanes(__m256d x) {
    const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
    const __m256d big =
        _mm256_cmp_pd(ax, _mm256_set1_pd(kTrigMax), _CMP_GT_OQ);
    const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    return _mm256_movemask_pd(_mm256_or_pd(big, nan));
}

} // namespace

namespace {

inline __m256d sin4(__m256d vx) {
    const TrigEval ev = reduce_and_eval(vx);
    // sin(r + q*pi/2): q even -> +-sin(r), q odd -> +-cos(r)
    const __m256d value = select_odd(ev.quad64, ev.sin_part, ev.cos_part);
    return negate_where_bit2(value, ev.quad64);
}

inline __m256d cos4(__m256d vx) {
    const TrigEval ev = reduce_and_eval(vx);
    // cos(r + q*pi/2): q even -> +-cos(r), q odd -> +-sin(r),
    // negated when (q+1) & 2 is set
    const __m256d value = select_odd(ev.quad64, ev.cos_part, ev.sin_part);
    const __m256i qp1 = _mm256_add_epi64(ev.quad64, _mm256_set1_epi64x(1));
    return negate_where_bit2(value, qp1);
}

template <typename VecFn, typename ScalarFn>
void trig_loop(const double* x, double* y, std::size_t n, VecFn vec,
               ScalarFn fallback) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, vec(vx));
        if (const int bad = huge_lanes(vx)) {
            for (int lane = 0; lane < 4; ++lane)
                if (bad & (1 << lane)) y[i + lane] = fallback(x[i + lane]);
        }
    }
    if (i < n) {
        // Padded tail through the same vector path; position-independent.
        double buf[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = i; k < n; ++k) buf[k - i] = x[k];
        const __m256d vx = _mm256_loadu_pd(buf);
        _mm256_storeu_pd(buf, vec(vx));
        const int bad = huge_lanes(vx);
        for (std::size_t k = i; k < n; ++k) {
            y[k] = buf[k - i];
            if (bad & (1 << static_cast<int>(k - i))) y[k] = fallback(x[k]);
        }
    }
}

} // namespace

void vsin(const double* x, double* y, std::size_t n) {
    trig_loop(x, y, n, [](__m256d v) { return sin4(v); },
              [](double v) { return std::sin(v); });
}

void vcos(const double* x, double* y, std::size_t n) {
    trig_loop(x, y, n, [](__m256d v) { return cos4(v); },
              [](double v) { return std::cos(v); });
}

} // namespace surrokit::simd::avx2

#endif // SURROKIT_X86_64
