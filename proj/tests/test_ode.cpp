#include <doctest.h>

#include <cmath>

#include "nlsv/ode.hpp"

using namespace nlsv;

TEST_CASE("linear rotation is integrated to tolerance") {
    // y' = i w y, y = e^{i w t}
    const double w = 3.0;
    Rhs f = [&](double, const cd* y, cd* dy) { dy[0] = cd(0, w) * y[0]; };
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    auto tr = integrate(f, {cd(1, 0)}, 0, 10, linspace(0, 10, 11), o);
    REQUIRE(tr.states.size() == 11);
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        CHECK(std::abs(tr.states[k][0] - std::polar(1.0, w * tr.times[k])) < 1e-9);
    CHECK(tr.meta.steps > 0);
}

TEST_CASE("samples are hit exactly by dense output") {
    Rhs f = [](double t, const cd*, cd* dy) { dy[0] = 5 * t * t * t * t; };  // y = t^5
    OdeOptions o;
    o.rtol = 1e-13;
    o.atol = 1e-13;
    auto tr = integrate(f, {cd(0)}, 0, 2, {0.1, 0.37, 1.0, 1.999, 2.0}, o);
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        CHECK(std::abs(tr.states[k][0].real() - std::pow(tr.times[k], 5)) < 1e-10);
}

TEST_CASE("backwards integration") {
    Rhs f = [](double, const cd* y, cd* dy) { dy[0] = -y[0]; };
    OdeOptions o;
    o.rtol = 1e-12;
    auto tr = integrate(f, {cd(1)}, 1, 0, {0.5, 0.0}, o);
    CHECK(tr.states.back()[0].real() == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("fifth order convergence with a fixed step") {
    // y' = y cos t on [0, 1]: y = exp(sin t)
    Rhs f = [](double t, const cd* y, cd* dy) { dy[0] = y[0] * std::cos(t); };
    auto err = [&](double h) {
        OdeOptions o;
        o.rtol = 1;
        o.atol = 1;
        o.h0 = h;
        o.h_max = h;
        auto tr = integrate(f, {cd(1)}, 0, 1, {1.0}, o);
        return std::abs(tr.states.back()[0].real() - std::exp(std::sin(1.0)));
    };
    const double e1 = err(0.1), e2 = err(0.05);
    CHECK(std::log2(e1 / e2) > 4.5);
}

TEST_CASE("step limit raises with a partial trajectory") {
    Rhs f = [](double, const cd* y, cd* dy) { dy[0] = cd(0, 100) * y[0]; };
    OdeOptions o;
    o.max_steps = 20;
    try {
        integrate(f, {cd(1)}, 0, 100, linspace(0, 100, 1001), o);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.partial().meta.stopped_early);
        CHECK(e.partial().states.size() < 1001);
    }
}

TEST_CASE("observer can stop early") {
    Rhs f = [](double, const cd*, cd* dy) { dy[0] = 1; };
    std::size_t seen = 0;
    auto tr = integrate(f, {cd(0)}, 0, 10, linspace(0, 10, 101), {}, [&](const DenseStep& s) {
        ++seen;
        return s.t_new < 3;
    });
    CHECK(tr.meta.stopped_early);
    CHECK(tr.times.back() <= 10);
    CHECK(seen >= 1);
}

TEST_CASE("linspace endpoints") {
    auto v = linspace(0, 1, 5);
    CHECK(v.front() == 0);
    CHECK(v.back() == 1);
    CHECK(v[2] == 0.5);
}
