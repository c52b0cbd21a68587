#include <doctest.h>

#include <random>

#include "nlsv/normal_form.hpp"

using namespace nlsv;

namespace {

AmplitudeField random_field(Frame f, const ModeIndex& box, double l1, unsigned seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> z;
    AmplitudeField a(f);
    for (Freq n : box.modes()) a.set(n, cd(z(g), z(g)));
    return (l1 / l1_norm(a)) * a;
}

double l1_diff(const AmplitudeField& a, const AmplitudeField& b) { return l1_norm(a - b); }

}  // namespace

TEST_CASE("{D, m} = -i rho m on quartic monomials") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(3);
    auto D = build_D(box, V);
    std::mt19937_64 g(4);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int i = 0; i < 50; ++i) {
        Freq a{c(g), c(g)}, b{c(g), c(g)}, d{c(g), c(g)};
        Freq n = a - b + d;
        if (!box.contains(n)) continue;
        PolyHamiltonian m;
        m.add(1, Monomial::quartic(a, b, d, n));
        m.finalize();
        auto br = poisson_bracket(D, m);
        const double rho = small_divisor(a, b, d, n, V);
        if (rho == 0) {
            CHECK(br.empty());
            continue;
        }
        REQUIRE(br.size() == 1);
        CHECK(std::abs(br.terms()[0].c - cd(0, -rho)) < 1e-12);
    }
}

TEST_CASE("poisson bracket is antisymmetric and real Hamiltonians stay real") {
    auto box = ModeIndex::square(1);
    auto V = ConvPotential::sample_decaying();
    ResonanceParams p{0.3, kappa0(V)};
    auto F = build_F(box, V, p);
    auto G = build_G(box);
    CHECK(F.reality_defect() < 1e-15);
    CHECK(G.reality_defect() < 1e-15);
    auto a = poisson_bracket(G, F), b = poisson_bracket(F, G);
    auto s = a + b;
    double m = 0;
    for (const auto& t : s.terms()) m = std::max(m, std::abs(t.c));
    CHECK(m < 1e-13);
    CHECK(a.reality_defect() < 1e-13);
}

TEST_CASE("coefficient shapes") {
    auto V0 = ConvPotential::zero();
    ResonanceParams p{0.3, 1};
    CHECK(coeff_Gprime({1, 1}, {1, 1}, {1, 1}, {1, 1}) == -1);
    CHECK(coeff_Gprime({1, 0}, {1, 0}, {2, 0}, {2, 0}) == 0);  // n3 = n4, removed by the gauge
    CHECK(coeff_Gprime({1, 0}, {0, 1}, {0, 2}, {1, 1}) == 1);
    // I'(ii): F = -i / rho
    CHECK(coeff_F({1, 0}, {0, 1}, {0, -1}, {1, -2}, V0, p) == cd(0, 0.25));
    CHECK(coeff_F({1, 0}, {1, 1}, {2, 1}, {2, 0}, V0, p) == cd(0, 0));      // A1
    CHECK(coeff_Gtilde({1, 0}, {1, 1}, {2, 1}, {2, 0}, V0, p) == 1);         // A1 kept
    CHECK(coeff_Gtilde({1, 0}, {0, 1}, {0, -1}, {1, -2}, V0, p) == 0);       // removed
    CHECK(coeff_Gtilde({2, 2}, {2, 2}, {2, 2}, {2, 2}, V0, p) == -1);        // self term kept
}

TEST_CASE("cancellation identity holds, and a corrupted F is caught") {
    for (auto V : {ConvPotential::zero(), ConvPotential::sample_decaying()}) {
        auto box = ModeIndex::square(3);
        ResonanceParams p{0.3, V.is_zero() ? 2 : kappa0(V)};
        auto r = cancellation_check(box, V, p);
        CHECK(r.passed);
        CHECK(r.max_iprime_residual <= 1e-12);
        CHECK(r.max_mismatch <= 1e-12);
        CHECK(r.self_terms_ok);
        CHECK(r.first_offender.empty());
        CHECK(r.monomials_checked > 0);

        auto bad = cancellation_check(box, V, p, true);
        CHECK_FALSE(bad.passed);
        CHECK_FALSE(bad.first_offender.empty());
        CHECK(bad.text().find("FAIL") != std::string::npos);
    }
    auto e = cancellation_check(ModeIndex(std::vector<Freq>{}), ConvPotential::zero(), {});
    CHECK(e.passed);
}

TEST_CASE("|F| <= 4 and F vanishes off I'") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(4);
    ResonanceParams p{0.3, kappa0(V)};
    auto F = build_F(box, V, p);
    for (const auto& t : F.terms()) CHECK(std::abs(t.c) <= 4.0);
    std::size_t bad = 0;
    for_each_box_tuple(box, V, p, [&](const Tuple4& t) {
        const cd f = coeff_F(t.n1, t.n2, t.n3, t.n4, V, p);
        const bool ip = t.cls == TupleClass::IPrime_i || t.cls == TupleClass::IPrime_ii;
        bad += ip ? std::abs(f - cd(0, -1 / t.rho)) > 1e-15 : f != cd{};
    });
    CHECK(bad == 0);
}

TEST_CASE("coefficient plans agree with the polynomial vector fields") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(2);
    ResonanceParams p{0.3, kappa0(V)};
    auto a = random_field(Frame::NormalForm, box, 1.0, 3);
    auto y = a.to_dense(box);
    std::vector<std::pair<QuarticKind, PolyHamiltonian>> cases = {
        {QuarticKind::F, build_F(box, V, p)},
        {QuarticKind::Gprime, build_G_prime(box)},
        {QuarticKind::Gtilde, build_G_tilde(box, V, p)}};
    for (const auto& [kind, H] : cases) {
        auto P1 = plan_from_coefficients(kind, box, V, p);
        auto P2 = plan_from_poly(H, box);
        std::vector<cd> o1(box.size()), o2(box.size());
        P1.eval(y.data(), o1.data());
        P2.eval(y.data(), o2.data());
        auto ref = H.vector_field(a).to_dense(box);
        for (std::size_t i = 0; i < box.size(); ++i) {
            CHECK(std::abs(o1[i] - ref[i]) < 1e-12);
            CHECK(std::abs(o2[i] - ref[i]) < 1e-12);
        }
    }
}

TEST_CASE("field derivatives against finite differences") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(1);
    ResonanceParams p{0.3, kappa0(V)};
    auto X = plan_from_coefficients(QuarticKind::F, box, V, p);
    auto y = random_field(Frame::NormalForm, box, 1, 5).to_dense(box);
    auto w = random_field(Frame::NormalForm, box, 1, 6).to_dense(box);
    const std::size_t n = box.size();
    std::vector<cd> d(n), fp(n), fm(n), yp(n), ym(n), s(n), dp(n), dm(n);
    X.derivative(y.data(), w.data(), d.data());
    const double h = 1e-5;
    for (std::size_t i = 0; i < n; ++i) {
        yp[i] = y[i] + h * w[i];
        ym[i] = y[i] - h * w[i];
    }
    X.eval(yp.data(), fp.data());
    X.eval(ym.data(), fm.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs((fp[i] - fm[i]) / (2 * h) - d[i]) < 1e-8);
    X.second(y.data(), w.data(), w.data(), s.data());
    X.derivative(yp.data(), w.data(), dp.data());
    X.derivative(ym.data(), w.data(), dm.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs((dp[i] - dm[i]) / (2 * h) - s[i]) < 1e-7);
}

TEST_CASE("Lie transform: series against the flow, mass preserved") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(1);
    ResonanceParams p{0.3, kappa0(V)};
    auto XF = plan_from_coefficients(QuarticKind::F, box, V, p);
    std::vector<double> errs;
    for (double eps : {0.4, 0.2}) {
        auto a = random_field(Frame::NormalForm, box, eps, 8);
        LieOptions exact;
        exact.order = 0;
        auto g = lie_transform(a, XF, exact);
        CHECK(g.value.frame() == Frame::Gauged);
        CHECK(mass(g.value) == doctest::Approx(mass(a)).epsilon(1e-11));
        LieOptions o3;
        o3.order = 3;
        auto s = lie_transform(a, XF, o3);
        errs.push_back(l1_diff(s.value, g.value));
        CHECK(g.gamma_minus_id_l1 <= 2 * g.K * eps * eps * eps + 1e-300);
    }
    // next term of the series is O(eps^9)
    CHECK(errs[0] / errs[1] > 100);
    LieOptions big;
    auto far = random_field(Frame::NormalForm, box, 2.0, 8);
    CHECK_THROWS(lie_transform(far, XF, big));
}

TEST_CASE("remainder is quintic: probe(eps a) / eps^5 bounded and led by 1/2 (DX_A X_F - DX_F X_A)") {
    auto V = ConvPotential::sample_decaying();
    auto box = ModeIndex::square(1);
    ResonanceParams p{0.3, kappa0(V)};
    auto a = random_field(Frame::NormalForm, box, 1.0, 12);
    std::vector<double> q;
    for (double eps : {0.2, 0.1, 0.05}) {
        auto s = eps * a;
        const double r = remainder_norm_probe(s, box, V, p);
        q.push_back(r / std::pow(eps, 5));
        auto lead = remainder_leading_field(s, box, V, p);
        auto full = remainder_field(s, box, V, p);
        CHECK(l1_diff(full, lead) <= 10 * std::pow(eps, 2) * l1_norm(lead));
    }
    CHECK(q[1] / q[2] == doctest::Approx(1).epsilon(0.05));
    CHECK(q[0] / q[2] < 1.5);
    CHECK(remainder_norm_probe(AmplitudeField(Frame::NormalForm), box, V, p) == 0);
}
