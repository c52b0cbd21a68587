// Compiled with -mavx2 -mfma; only reached through kernels::avx2() after a CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "nlsv/kernels.hpp"

namespace nlsv::kernels {

namespace {

inline __m256d cmul2(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);
    __m256d ai = _mm256_permute_pd(a, 0xF);
    __m256d bs = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline __m256d conj2(__m256d a) { return _mm256_xor_pd(a, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0)); }

inline __m256d pair(const cd* y, std::int32_t lo, std::int32_t hi) {
    return _mm256_set_m128d(_mm_loadu_pd(reinterpret_cast<const double*>(y + hi)),
                            _mm_loadu_pd(reinterpret_cast<const double*>(y + lo)));
}

inline void scatter_add(cd* dy, std::int32_t lo, std::int32_t hi, __m256d v) {
    double* pl = reinterpret_cast<double*>(dy + lo);
    _mm_storeu_pd(pl, _mm_add_pd(_mm_loadu_pd(pl), _mm256_castpd256_pd128(v)));
    double* ph = reinterpret_cast<double*>(dy + hi);
    _mm_storeu_pd(ph, _mm_add_pd(_mm_loadu_pd(ph), _mm256_extractf128_pd(v, 1)));
}

inline cd cmul1(cd a, cd b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void cubic_avx2(std::size_t n, const std::int32_t* out, const std::int32_t* i1, const std::int32_t* i2,
                const std::int32_t* i3, const cd* coef, const cd* y, cd* dy) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m256d a = pair(y, i1[k], i1[k + 1]);
        __m256d b = conj2(pair(y, i2[k], i2[k + 1]));
        __m256d c = pair(y, i3[k], i3[k + 1]);
        __m256d q = _mm256_loadu_pd(reinterpret_cast<const double*>(coef + k));
        scatter_add(dy, out[k], out[k + 1], cmul2(cmul2(cmul2(a, b), c), q));
    }
    for (; k < n; ++k)
        dy[out[k]] += cmul1(cmul1(cmul1(y[i1[k]], std::conj(y[i2[k]])), y[i3[k]]), coef[k]);
}

void quintic_avx2(std::size_t n, const std::int32_t* out, const std::int32_t* u1, const std::int32_t* u2,
                  const std::int32_t* u3, const std::int32_t* c1, const std::int32_t* c2, const cd* coef,
                  const cd* y, cd* dy) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m256d a = pair(y, u1[k], u1[k + 1]);
        __m256d b = pair(y, u2[k], u2[k + 1]);
        __m256d c = pair(y, u3[k], u3[k + 1]);
        __m256d d = conj2(pair(y, c1[k], c1[k + 1]));
        __m256d e = conj2(pair(y, c2[k], c2[k + 1]));
        __m256d q = _mm256_loadu_pd(reinterpret_cast<const double*>(coef + k));
        __m256d r = cmul2(cmul2(cmul2(a, b), c), cmul2(d, e));
        scatter_add(dy, out[k], out[k + 1], cmul2(r, q));
    }
    for (; k < n; ++k) {
        cd r = cmul1(cmul1(cmul1(y[u1[k]], y[u2[k]]), y[u3[k]]), cmul1(std::conj(y[c1[k]]), std::conj(y[c2[k]])));
        dy[out[k]] += cmul1(r, coef[k]);
    }
}

void lincomb_avx2(std::size_t n, const cd* y, std::size_t m, const double* a, const cd* const* k, cd* out) {
    const double* yy = reinterpret_cast<const double*>(y);
    double* oo = reinterpret_cast<double*>(out);
    const std::size_t len = 2 * n;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d acc = _mm256_loadu_pd(yy + i);
        for (std::size_t j = 0; j < m; ++j)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(a[j]), _mm256_loadu_pd(reinterpret_cast<const double*>(k[j]) + i),
                                  acc);
        _mm256_storeu_pd(oo + i, acc);
    }
    for (; i < len; ++i) {
        double acc = yy[i];
        for (std::size_t j = 0; j < m; ++j) acc = std::fma(a[j], reinterpret_cast<const double*>(k[j])[i], acc);
        oo[i] = acc;
    }
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double norm2_avx2(std::size_t n, const cd* z) {
    const double* p = reinterpret_cast<const double*>(z);
    const std::size_t len = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) s += p[i] * p[i];
    return s;
}

double err_sumsq_avx2(std::size_t n, const cd* e, const cd* y0, const cd* y1, double rtol, double atol) {
    const double* ee = reinterpret_cast<const double*>(e);
    const double* a = reinterpret_cast<const double*>(y0);
    const double* b = reinterpret_cast<const double*>(y1);
    const std::size_t len = 2 * n;
    const __m256d sign = _mm256_set1_pd(-0.0), vr = _mm256_set1_pd(rtol), va = _mm256_set1_pd(atol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d m = _mm256_max_pd(_mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)),
                                  _mm256_andnot_pd(sign, _mm256_loadu_pd(b + i)));
        __m256d sc = _mm256_fmadd_pd(vr, m, va);
        __m256d r = _mm256_div_pd(_mm256_loadu_pd(ee + i), sc);
        acc = _mm256_fmadd_pd(r, r, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) {
        double sc = std::fma(rtol, std::max(std::abs(a[i]), std::abs(b[i])), atol);
        double r = ee[i] / sc;
        s += r * r;
    }
    return s;
}

const Table kAvx2{"avx2", cubic_avx2, quintic_avx2, lincomb_avx2, norm2_avx2, err_sumsq_avx2};

}  // namespace

const Table* avx2_table_unchecked() { return &kAvx2; }

}  // namespace nlsv::kernels
