#include <doctest.h>

#include <random>

#include "nlsv/dynamics.hpp"

using namespace nlsv;

namespace {

AmplitudeField random_field(Frame f, const ModeIndex& box, double scale, unsigned seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> z;
    AmplitudeField a(f);
    for (Freq n : box.modes()) a.set(n, scale * cd(z(g), z(g)));
    return a;
}

ModeIndex twenty_modes() {
    std::vector<Freq> m;
    const auto sq = ModeIndex::square(2);
    for (Freq n : sq.modes())
        if (std::abs(n.x) + std::abs(n.y) < 4) m.push_back(n);
    m.pop_back();
    return ModeIndex(m);
}

}  // namespace

TEST_CASE("box system agrees with the sparse reference field") {
    auto box = ModeIndex::square(2);
    auto V = ConvPotential::sample_decaying();
    auto a = random_field(Frame::Original, box, 0.3, 1);
    for (Equation eq : {Equation::Full, Equation::Gauged}) {
        BoxSystem sys(eq, V, box);
        auto y = (eq == Equation::Full ? a : a.retagged(Frame::Gauged)).to_dense(box);
        std::vector<cd> dy(box.size());
        sys.rhs(0, y.data(), dy.data());
        auto ref = eq == Equation::Full ? full_rhs(a, V, box) : gauged_rhs(a.retagged(Frame::Gauged), V, box);
        auto rv = ref.to_dense(box);
        double m = 0;
        for (std::size_t i = 0; i < dy.size(); ++i) m = std::max(m, std::abs(dy[i] - rv[i]));
        CHECK(m < 1e-13);
    }
}

TEST_CASE("mass and Hamiltonian are conserved on a 20-mode Galerkin box") {
    auto box = twenty_modes();
    REQUIRE(box.size() == 20);
    auto V = ConvPotential::sample_decaying();
    auto a0 = random_field(Frame::Original, box, 0.2, 5);
    BoxSystem sys(Equation::Full, V, box);
    OdeOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    auto tr = integrate_field(sys, a0, 0, 50, linspace(0, 50, 26), o);
    const double m0 = mass(a0), h0 = hamiltonian(a0, V);
    double dm = 0, dh = 0;
    for (const auto& a : tr.states) {
        dm = std::max(dm, std::abs(mass(a) - m0) / m0);
        dh = std::max(dh, std::abs(hamiltonian(a, V) - h0) / std::abs(h0));
    }
    CHECK(dm <= 1e-8);
    CHECK(dh <= 1e-8);
}

TEST_CASE("gauge and rotation preserve moduli and invert") {
    auto box = ModeIndex::square(3);
    auto V = ConvPotential::sample_decaying();
    auto r = random_field(Frame::Gauged, box, 1.0, 9);
    const double t = 123.456;
    auto a = gauge_forward(r, t);
    auto b = rotate_backward(a.retagged(Frame::NormalForm), V, t);
    for (const auto& [n, v] : r) {
        CHECK(std::abs(std::abs(a.get(n)) - std::abs(v)) <= 1e-15 * std::abs(v) + 1e-300);
        CHECK(std::abs(std::abs(b.get(n)) - std::abs(v)) <= 1e-15 * std::abs(v) + 1e-300);
    }
    auto back = gauge_backward(a, t);
    auto rot = rotate_forward(b, V, t);
    // the inverse recomputes the mass, so the phase 2 m t carries its rounding
    const double tol = 4e-16 * (1 + 2 * mass(r) * t);
    for (const auto& [n, v] : r) {
        CHECK(std::abs(back.get(n) - v) < tol * std::abs(v) + 1e-15);
        CHECK(std::abs(rot.get(n) - a.get(n)) < 1e-14);
    }
    CHECK(b.frame() == Frame::Rotating);
    CHECK_THROWS(gauge_forward(a, t));  // wrong frame
}

TEST_CASE("the gauge maps solutions of the full equation to the gauged one") {
    auto box = ModeIndex::square(1);
    auto V = ConvPotential::zero();
    auto a0 = random_field(Frame::Original, box, 0.3, 11);
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    const double T = 3;
    auto full = integrate_field(BoxSystem(Equation::Full, V, box), a0, 0, T, {T}, o);
    auto gauged = integrate_field(BoxSystem(Equation::Gauged, V, box), a0.retagged(Frame::Gauged), 0, T, {T}, o);
    auto r = gauge_backward(full.states.back(), T);
    for (const auto& [n, v] : r) CHECK(std::abs(gauged.states.back().get(n) - v) < 1e-9);
}

TEST_CASE("a single mode only rotates") {
    auto box = ModeIndex(std::vector<Freq>{{2, 1}});
    auto V = ConvPotential::zero();
    AmplitudeField a0(Frame::Original, {{{2, 1}, {0.5, 0}}});
    OdeOptions o;
    o.rtol = 1e-12;
    auto tr = integrate_field(BoxSystem(Equation::Full, V, box), a0, 0, 1, {1.0}, o);
    // omega = 5 + |a|^2 (the single self term)
    CHECK(std::abs(tr.states.back().get({2, 1}) - std::polar(0.5, 5.25)) < 1e-10);
}

TEST_CASE("trajectory csv header") {
    auto box = ModeIndex(std::vector<Freq>{{0, 0}});
    AmplitudeField a0(Frame::Original, {{{0, 0}, 1}});
    auto tr = integrate_field(BoxSystem(Equation::Full, ConvPotential::zero(), box), a0, 0, 1, {0.0, 1.0}, {});
    auto csv = trajectory_csv(tr, ConvPotential::zero(), 1, {{0, 0}});
    CHECK(csv.substr(0, csv.find('\n')) == "t,mass,hamiltonian,sobolev_s,l1,\"re_(0,0)\",\"im_(0,0)\"");
}
