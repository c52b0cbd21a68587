#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsv {

using cd = std::complex<double>;
using State = std::vector<cd>;

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    double rtol = 0;
    double atol = 0;
    bool stopped_early = false;
};

template <class S>
struct Trajectory {
    std::vector<double> times;
    std::vector<S> states;
    IntegratorStats meta;
};

// dy must be fully overwritten by the callee.
using Rhs = std::function<void(double t, const cd* y, cd* dy)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 0;  // 0 = automatic
    double h_max = std::numeric_limits<double>::infinity();
    double h_min = 1e-14;  // relative to max(1,|t|)
    std::size_t max_steps = 50'000'000;
};

// One accepted step with its Dormand-Prince continuous extension.
class DenseStep {
public:
    double t_old = 0, t_new = 0;
    void eval(double t, cd* out) const;
    std::size_t dim() const { return r1_.size(); }

private:
    friend class Dopri5;
    std::vector<cd> r1_, r2_, r3_, r4_, r5_;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, Trajectory<State> partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const Trajectory<State>& partial() const { return partial_; }

private:
    Trajectory<State> partial_;
};

// Observer sees every accepted step; returning false stops the integration
// (the trajectory then ends at the last sample time already passed).
using StepObserver = std::function<bool(const DenseStep&)>;

class Dopri5 {
public:
    Dopri5(Rhs f, std::size_t dim, OdeOptions opts);

    // Integrates from t0 to the last sample time (samples must be strictly
    // monotone in the direction of integration and start at or after t0).
    Trajectory<State> run(const State& y0, double t0, const std::vector<double>& samples,
                          const StepObserver& observer = {});

private:
    Rhs f_;
    std::size_t n_;
    OdeOptions o_;
    double initial_step(double t0, const State& y0, const State& f0, double dir) const;
};

// Convenience: n uniform samples on [t0, t1] inclusive.
std::vector<double> linspace(double t0, double t1, std::size_t n);

Trajectory<State> integrate(const Rhs& f, const State& y0, double t0, double t1,
                            const std::vector<double>& samples, const OdeOptions& opts,
                            const StepObserver& observer = {});

}  // namespace nlsv
