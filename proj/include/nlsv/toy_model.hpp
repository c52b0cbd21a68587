#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlsv/field.hpp"
#include "nlsv/lambda.hpp"
#include "nlsv/ode.hpp"

namespace nlsv {

// (b_1, ..., b_N); b_0 = b_{N+1} = 0 implicitly.
using ToyState = std::vector<cd>;

// db_j = -i |b_j|^2 b_j + 2i conj(b_j) (b_{j-1}^2 + b_{j+1}^2)
void toy_rhs(const cd* b, cd* db, std::size_t N);
ToyState toy_rhs(const ToyState& b);
double toy_mass(const ToyState& b);

Trajectory<ToyState> toy_integrate(const ToyState& b0, const std::vector<double>& samples, const OdeOptions& opt = {});

// b^lambda(t) = b(lambda^{-2} t) / lambda
Trajectory<ToyState> rescale_solution(const Trajectory<ToyState>& tr, double lambda);

// Largest |d/dt b^lambda - toy_rhs(b^lambda)| over `n` sample times in [0, lambda^2 T], the time
// derivative taken by a five-point stencil on the rescaled solution.
double rescale_residual(const ToyState& b0, double T, double lambda, int n = 16);

struct SliderOptions {
    double delta_seed = 1e-3;
    double eps_prime = 0.1;  // target: |b_end(T0)|^2 >= (1 - eps_prime) mass
    double horizon = 60;     // per stage
    int phase_grid = 16;
    int golden_iters = 40;
    std::size_t budget = 4000;  // integrations
    double rtol = 1e-12;
};

struct SliderStage {
    int from = 0, to = 0;
    double phase = 0;
    double peak_fraction = 0;
    double t_peak = 0;
};

struct SliderResult {
    ToyState b0;
    double T0 = 0;          // first time the end slot holds >= (1 - eps_prime) of the mass
    double t_peak = 0;
    double achieved = 1;    // 1 - peak fraction in the end slot
    double start_fraction = 0;
    bool success = false;
    std::size_t evaluations = 0;
    std::vector<SliderStage> stages;
};

// Staged two-slot transfer: every slot after `start` is seeded at t = 0 with delta_seed e^{i phi_k};
// the phases are tuned one stage at a time (grid, then golden section) to maximize the peak share
// of the next slot. Deterministic.
SliderResult slider_search(int N, int start, int end, double eps, const SliderOptions& opt = {});

// share of the mass in slot `slot` (1-based)
double slot_fraction(const ToyState& b, int slot);

ToyState restrict_to_mtilde(const AmplitudeField& beta, const GenerationSet& S, double tol = 1e-12);
AmplitudeField lift_from_mtilde(const ToyState& b, const GenerationSet& S);

// t, |b_1|^2, ..., |b_N|^2, mass
std::string toy_csv(const Trajectory<ToyState>& tr);

}  // namespace nlsv
