#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace nlsv {

using cd = std::complex<double>;

// Gathered cubic interaction list:  dy[out] += coef * y[i1] * conj(y[i2]) * y[i3]
struct CubicPlan {
    std::vector<std::int32_t> out, i1, i2, i3;
    std::vector<cd> coef;

    std::size_t size() const { return out.size(); }
    void add(std::int32_t o, std::int32_t a, std::int32_t b, std::int32_t c, cd k) {
        out.push_back(o);
        i1.push_back(a);
        i2.push_back(b);
        i3.push_back(c);
        coef.push_back(k);
    }
    void reserve(std::size_t n);
};

// Quintic list:  dy[out] += coef * y[u1] y[u2] y[u3] conj(y[c1]) conj(y[c2])
struct QuinticPlan {
    std::vector<std::int32_t> out, u1, u2, u3, c1, c2;
    std::vector<cd> coef;

    std::size_t size() const { return out.size(); }
    void add(std::int32_t o, std::int32_t a, std::int32_t b, std::int32_t c, std::int32_t d,
             std::int32_t e, cd k) {
        out.push_back(o);
        u1.push_back(a);
        u2.push_back(b);
        u3.push_back(c);
        c1.push_back(d);
        c2.push_back(e);
        coef.push_back(k);
    }
};

namespace kernels {

// Function table; one scalar reference implementation and one AVX2+FMA variant.
struct Table {
    const char* name;
    // coef may differ from plan.coef (phased plans pass a scratch buffer)
    void (*cubic)(std::size_t n, const std::int32_t* out, const std::int32_t* i1,
                  const std::int32_t* i2, const std::int32_t* i3, const cd* coef, const cd* y, cd* dy);
    void (*quintic)(std::size_t n, const std::int32_t* out, const std::int32_t* u1,
                    const std::int32_t* u2, const std::int32_t* u3, const std::int32_t* c1,
                    const std::int32_t* c2, const cd* coef, const cd* y, cd* dy);
    // out = y + sum_j a[j] * k[j]   (m terms, n complex entries)
    void (*lincomb)(std::size_t n, const cd* y, std::size_t m, const double* a, const cd* const* k, cd* out);
    // sum |z_i|^2
    double (*norm2)(std::size_t n, const cd* z);
    // sum over real components of (e / (atol + rtol * max(|y0|, |y1|)))^2
    double (*err_sumsq)(std::size_t n, const cd* e, const cd* y0, const cd* y1, double rtol, double atol);
};

const Table& scalar();
// nullptr when the CPU or the build lacks AVX2/FMA
const Table* avx2();
// Selected once at first use: AVX2 when available unless NLSV_FORCE_SCALAR is set.
const Table& active();

void cubic_accumulate(const CubicPlan& p, const cd* y, cd* dy);
void cubic_accumulate(const CubicPlan& p, const std::vector<cd>& coef, const cd* y, cd* dy);
void quintic_accumulate(const QuinticPlan& p, const cd* y, cd* dy);
void quintic_accumulate(const QuinticPlan& p, const std::vector<cd>& coef, const cd* y, cd* dy);

}  // namespace kernels
}  // namespace nlsv
