#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nlsv/kernels.hpp"

namespace nlsv::kernels {

namespace {

// plain complex product; std::complex's operator* drags in the Annex G
// inf/nan recovery path, which we never want here
inline void cmul(double ar, double ai, double br, double bi, double& r, double& i) {
    r = ar * br - ai * bi;
    i = ar * bi + ai * br;
}

void cubic_scalar(std::size_t n, const std::int32_t* out, const std::int32_t* i1, const std::int32_t* i2,
                  const std::int32_t* i3, const cd* coef, const cd* y, cd* dy) {
    for (std::size_t k = 0; k < n; ++k) {
        const cd a = y[i1[k]], b = y[i2[k]], c = y[i3[k]], q = coef[k];
        double tr, ti, ur, ui, vr, vi;
        cmul(a.real(), a.imag(), b.real(), -b.imag(), tr, ti);
        cmul(tr, ti, c.real(), c.imag(), ur, ui);
        cmul(ur, ui, q.real(), q.imag(), vr, vi);
        dy[out[k]] += cd(vr, vi);
    }
}

void quintic_scalar(std::size_t n, const std::int32_t* out, const std::int32_t* u1, const std::int32_t* u2,
                    const std::int32_t* u3, const std::int32_t* c1, const std::int32_t* c2, const cd* coef,
                    const cd* y, cd* dy) {
    for (std::size_t k = 0; k < n; ++k) {
        const cd a = y[u1[k]], b = y[u2[k]], c = y[u3[k]], d = y[c1[k]], e = y[c2[k]], q = coef[k];
        double r1, m1, r2, m2, r3, m3, r4, m4, r5, m5;
        cmul(a.real(), a.imag(), b.real(), b.imag(), r1, m1);
        cmul(d.real(), -d.imag(), e.real(), -e.imag(), r2, m2);
        cmul(r1, m1, c.real(), c.imag(), r3, m3);
        cmul(r3, m3, r2, m2, r4, m4);
        cmul(r4, m4, q.real(), q.imag(), r5, m5);
        dy[out[k]] += cd(r5, m5);
    }
}

void lincomb_scalar(std::size_t n, const cd* y, std::size_t m, const double* a, const cd* const* k, cd* out) {
    const double* yy = reinterpret_cast<const double*>(y);
    double* oo = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        double acc = yy[i];
        for (std::size_t j = 0; j < m; ++j) acc += a[j] * reinterpret_cast<const double*>(k[j])[i];
        oo[i] = acc;
    }
}

double norm2_scalar(std::size_t n, const cd* z) {
    const double* p = reinterpret_cast<const double*>(z);
    double acc = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) acc += p[i] * p[i];
    return acc;
}

double err_sumsq_scalar(std::size_t n, const cd* e, const cd* y0, const cd* y1, double rtol, double atol) {
    const double* ee = reinterpret_cast<const double*>(e);
    const double* a = reinterpret_cast<const double*>(y0);
    const double* b = reinterpret_cast<const double*>(y1);
    double acc = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        double r = ee[i] / sc;
        acc += r * r;
    }
    return acc;
}

const Table kScalar{"scalar", cubic_scalar, quintic_scalar, lincomb_scalar, norm2_scalar, err_sumsq_scalar};

}  // namespace

const Table& scalar() { return kScalar; }

#if defined(NLSV_HAVE_AVX2)
const Table* avx2_table_unchecked();

const Table* avx2() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? avx2_table_unchecked() : nullptr;
}
#else
const Table* avx2() { return nullptr; }
#endif

const Table& active() {
    static const Table* chosen = [] {
        const char* force = std::getenv("NLSV_FORCE_SCALAR");
        if (force && *force && *force != '0') return &kScalar;
        const Table* t = avx2();
        return t ? t : &kScalar;
    }();
    return *chosen;
}

void cubic_accumulate(const CubicPlan& p, const cd* y, cd* dy) {
    active().cubic(p.size(), p.out.data(), p.i1.data(), p.i2.data(), p.i3.data(), p.coef.data(), y, dy);
}

void cubic_accumulate(const CubicPlan& p, const std::vector<cd>& coef, const cd* y, cd* dy) {
    active().cubic(p.size(), p.out.data(), p.i1.data(), p.i2.data(), p.i3.data(), coef.data(), y, dy);
}

void quintic_accumulate(const QuinticPlan& p, const cd* y, cd* dy) {
    active().quintic(p.size(), p.out.data(), p.u1.data(), p.u2.data(), p.u3.data(), p.c1.data(), p.c2.data(),
                     p.coef.data(), y, dy);
}

void quintic_accumulate(const QuinticPlan& p, const std::vector<cd>& coef, const cd* y, cd* dy) {
    active().quintic(p.size(), p.out.data(), p.u1.data(), p.u2.data(), p.u3.data(), p.c1.data(), p.c2.data(),
                     coef.data(), y, dy);
}

}  // namespace nlsv::kernels

namespace nlsv {
void CubicPlan::reserve(std::size_t n) {
    out.reserve(n);
    i1.reserve(n);
    i2.reserve(n);
    i3.reserve(n);
    coef.reserve(n);
}
}  // namespace nlsv
