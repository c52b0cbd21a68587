#pragma once

#include <string>
#include <vector>

#include "nlsv/field.hpp"
#include "nlsv/kernels.hpp"
#include "nlsv/lambda.hpp"
#include "nlsv/ode.hpp"
#include "nlsv/potential.hpp"
#include "nlsv/resonance.hpp"
#include "nlsv/toy_model.hpp"

namespace nlsv {

// beta^lambda_n(t) = b_j(t / lambda^2) / lambda on Lambda_j, in the rotating frame
Trajectory<AmplitudeField> embed_beta_lambda(const GenerationSet& S, const Trajectory<ToyState>& toy, double lambda);

// -i dbeta_n/dt = -|beta_n|^2 beta_n + sum_{A0(n)} beta1 conj(beta2) beta3 e^{i rho t} + sum_{A1(n)} beta1 conj(beta2) beta3,
// the sums over ordered (n1, n3) with n1, n2, n3 in the support of beta.
AmplitudeField truncated_rhs(const AmplitudeField& beta, const ConvPotential& V, const ResonanceParams& p, double t = 0);
// the same field written through the family structure of S (requires support in Lambda)
AmplitudeField family_rhs(const AmplitudeField& beta, const GenerationSet& S);
// A1 sum with the factor (e^{i rho t} - 1)
AmplitudeField remainder_J_rhs(const AmplitudeField& beta, const ConvPotential& V, const ResonanceParams& p, double t);

// One merged quintic monomial of the leading normal-form remainder in rotating coordinates:
// dbeta_n += coef e^{i omega_v t} beta_u1 beta_u2 beta_u3 conj(beta_c1 beta_c2).
struct QuinticTerm {
    Freq n;
    std::array<Freq, 3> u;
    std::array<Freq, 2> c;
    cd coef;
    std::int64_t omega_int = 0;  // integer part of the phase (only 0 is kept when resonant_only)
    double omega_v = 0;
};

// Terms of 1/2 (DX_A X_F - DX_F X_A), A = G' + G~, with all five inputs in `support`.
std::vector<QuinticTerm> quintic_terms(const std::vector<Freq>& support, const ConvPotential& V,
                                       const ResonanceParams& p, bool resonant_only = true);
AmplitudeField quintic_rhs(const std::vector<QuinticTerm>& terms, const AmplitudeField& beta, double t);

struct FullSystemOptions {
    bool with_J = true;
    bool with_quintic = true;
};

// Comparison dynamics on a finite mode set B = Lambda + resonant quintic outputs:
// every A0/A1 tuple with all four modes in B (phase e^{i rho t}), the self term, and the
// resonant quintic terms fed by `source` (the support of the reference orbit).
class CascadeSystem {
public:
    CascadeSystem(const GenerationSet& S, const std::vector<Freq>& source, const ConvPotential& V,
                  const ResonanceParams& p, const FullSystemOptions& opt = {});

    const ModeIndex& box() const { return box_; }
    std::size_t cubic_terms() const { return cubic_.size(); }
    std::size_t quintic_count() const { return quintic_.size(); }
    double max_abs_rho() const { return max_rho_; }

    void rhs(double t, const cd* y, cd* dy) const;
    // truncated part only (A1 without phase), used as the reference field
    void truncated(double t, const cd* y, cd* dy) const;

private:
    ModeIndex box_;
    CubicPlan cubic_;          // coefficient i
    std::vector<double> rho_;  // per cubic term
    std::vector<char> a1_;     // per cubic term
    QuinticPlan quintic_;
    std::vector<double> omega_v_;
    double max_rho_ = 0;
    bool phased_cubic_ = false, phased_quintic_ = false;
    mutable std::vector<cd> scratch_;
};

struct ExperimentConfig {
    GenerationSet set;
    ConvPotential V = ConvPotential::zero();
    double s = 2;
    double lambda = 16;
    double eps = 0.05;
    int start = 0, end = 0;  // slider slots, 0 = N-2 -> N-1
    SliderOptions slider;
    std::size_t samples = 512;
    double rtol = 1e-12, atol = 1e-22;
    FullSystemOptions dynamics;
    double bootstrap_C = 1;
};

void validate(const ExperimentConfig& cfg);

struct DeviationSeries {
    std::vector<double> times, l1_deviation;
    double bound = 0;  // lambda^{-2}
    double peak = 0;
};

struct ExperimentRun {
    SliderResult slider;
    double T = 0;  // lambda^2 T0
    std::size_t box_size = 0, cubic_terms = 0, quintic_terms = 0;
    double max_abs_rho = 0;
    Trajectory<ToyState> reference;         // rescaled toy orbit (already b^lambda)
    Trajectory<AmplitudeField> full;        // rotating frame, on the box
    DeviationSeries deviation;
    IntegratorStats stats;
    bool flagged = false;  // integration stopped early
    std::string message;
};

ExperimentRun approximation_experiment(const ExperimentConfig& cfg);

struct ChainCheck {
    std::string name;
    double lhs = 0, rhs = 0;  // holds when lhs <= rhs
    bool ok = false;
};

struct SobolevReport {
    std::vector<double> times, hs, mass, energy;
    std::vector<std::vector<double>> generation_share;  // per sample, per generation (mass share of Lambda_j)
    double initial = 0, final_value = 0, ratio = 0;
    double sqrt_growth = 0;  // sqrt(S_{end} / S_{start})
    std::vector<long double> S;
    double gamma_minus_id = 0;  // max over samples of ||Gamma(alpha) - alpha||_1
    std::vector<ChainCheck> chain;
    bool all_ok = false;
};

SobolevReport sobolev_growth_report(const ExperimentConfig& cfg, const ExperimentRun& run);

struct ZProbe {
    std::vector<double> times, z0, z1, z2, xi;
    double z0_peak = 0, z1_peak = 0, z2_peak = 0;
    double bootstrap_bound = 0;  // C lambda^{-3/2} 2^{-N}
    bool bootstrap_ok = false;
};

// Z0 = full(ref) - truncated(ref), Z1 xi = D full(ref) xi, Z2 = full(ref + xi) - full(ref) - Z1 xi
ZProbe z_decomposition_probe(const ExperimentConfig& cfg, const ExperimentRun& run, std::size_t stride = 8);

std::string deviation_csv(const DeviationSeries& d);
std::string sobolev_csv(const SobolevReport& r);
std::string generations_csv(const SobolevReport& r);

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlsv
