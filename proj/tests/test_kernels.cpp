#include <doctest.h>

#include <random>

#include "nlsv/kernels.hpp"

using namespace nlsv;

namespace {

struct Fixture {
    std::size_t n = 37;
    CubicPlan cubic;
    QuinticPlan quintic;
    std::vector<cd> y, coef;

    explicit Fixture(std::size_t terms, unsigned seed = 7) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1);
        std::normal_distribution<double> z;
        for (std::size_t i = 0; i < terms; ++i) {
            cubic.add(idx(g), idx(g), idx(g), idx(g), {z(g), z(g)});
            quintic.add(idx(g), idx(g), idx(g), idx(g), idx(g), idx(g), {z(g), z(g)});
            coef.emplace_back(z(g), z(g));
        }
        for (std::size_t i = 0; i < n; ++i) y.emplace_back(z(g), z(g));
    }
};

double maxdiff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("scalar cubic kernel matches the definition") {
    Fixture f(101);
    std::vector<cd> ref(f.n), dy(f.n);
    for (std::size_t k = 0; k < f.cubic.size(); ++k)
        ref[f.cubic.out[k]] += f.cubic.coef[k] * f.y[f.cubic.i1[k]] * std::conj(f.y[f.cubic.i2[k]]) * f.y[f.cubic.i3[k]];
    const auto& s = kernels::scalar();
    s.cubic(f.cubic.size(), f.cubic.out.data(), f.cubic.i1.data(), f.cubic.i2.data(), f.cubic.i3.data(),
            f.cubic.coef.data(), f.y.data(), dy.data());
    CHECK(maxdiff(ref, dy) < 1e-12);
}

TEST_CASE("scalar quintic kernel matches the definition") {
    Fixture f(101);
    std::vector<cd> ref(f.n), dy(f.n);
    const auto& q = f.quintic;
    for (std::size_t k = 0; k < q.size(); ++k)
        ref[q.out[k]] += q.coef[k] * f.y[q.u1[k]] * f.y[q.u2[k]] * f.y[q.u3[k]] * std::conj(f.y[q.c1[k]]) *
                         std::conj(f.y[q.c2[k]]);
    kernels::quintic_accumulate(q, f.y.data(), dy.data());
    CHECK(maxdiff(ref, dy) < 1e-11);
}

TEST_CASE("coefficient override replaces the plan coefficients") {
    Fixture f(50);
    CubicPlan p = f.cubic;
    p.coef = f.coef;
    std::vector<cd> a(f.n), b(f.n);
    kernels::cubic_accumulate(p, f.y.data(), a.data());
    kernels::cubic_accumulate(f.cubic, f.coef, f.y.data(), b.data());
    CHECK(maxdiff(a, b) == 0);
}

TEST_CASE("avx2 variant agrees with the scalar reference") {
    const kernels::Table* v = kernels::avx2();
    if (!v) {
        MESSAGE("AVX2 unavailable, equivalence test skipped");
        return;
    }
    const auto& s = kernels::scalar();
    for (std::size_t terms : {0, 1, 2, 3, 5, 64, 257}) {
        Fixture f(terms, static_cast<unsigned>(terms) + 1);
        std::vector<cd> a(f.n), b(f.n);
        s.cubic(terms, f.cubic.out.data(), f.cubic.i1.data(), f.cubic.i2.data(), f.cubic.i3.data(), f.coef.data(),
                f.y.data(), a.data());
        v->cubic(terms, f.cubic.out.data(), f.cubic.i1.data(), f.cubic.i2.data(), f.cubic.i3.data(), f.coef.data(),
                 f.y.data(), b.data());
        CHECK(maxdiff(a, b) < 1e-12);

        const auto& q = f.quintic;
        std::fill(a.begin(), a.end(), cd{});
        std::fill(b.begin(), b.end(), cd{});
        s.quintic(terms, q.out.data(), q.u1.data(), q.u2.data(), q.u3.data(), q.c1.data(), q.c2.data(), q.coef.data(),
                  f.y.data(), a.data());
        v->quintic(terms, q.out.data(), q.u1.data(), q.u2.data(), q.u3.data(), q.c1.data(), q.c2.data(),
                   q.coef.data(), f.y.data(), b.data());
        CHECK(maxdiff(a, b) < 1e-11);
    }
    for (std::size_t n : {0, 1, 2, 7, 64}) {
        Fixture f(1);
        std::vector<cd> k1(n), k2(n), y(n), y1(n), a(n), b(n);
        std::mt19937_64 g(n);
        std::normal_distribution<double> z;
        for (std::size_t i = 0; i < n; ++i) {
            k1[i] = {z(g), z(g)};
            k2[i] = {z(g), z(g)};
            y[i] = {z(g), z(g)};
            y1[i] = {z(g), z(g)};
        }
        const double w[2] = {0.3, -1.7};
        const cd* ks[2] = {k1.data(), k2.data()};
        s.lincomb(n, y.data(), 2, w, ks, a.data());
        v->lincomb(n, y.data(), 2, w, ks, b.data());
        CHECK(maxdiff(a, b) < 1e-14);
        CHECK(s.norm2(n, k1.data()) == doctest::Approx(v->norm2(n, k1.data())).epsilon(1e-14));
        CHECK(s.err_sumsq(n, k1.data(), y.data(), y1.data(), 1e-6, 1e-9) ==
              doctest::Approx(v->err_sumsq(n, k1.data(), y.data(), y1.data(), 1e-6, 1e-9)).epsilon(1e-13));
    }
}

TEST_CASE("active table is one of the two") {
    const auto& a = kernels::active();
    CHECK((&a == &kernels::scalar() || &a == kernels::avx2()));
}
