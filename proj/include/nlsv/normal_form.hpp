#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsv/field.hpp"
#include "nlsv/kernels.hpp"
#include "nlsv/ode.hpp"
#include "nlsv/poly.hpp"
#include "nlsv/potential.hpp"
#include "nlsv/resonance.hpp"

namespace nlsv {

// Tuple coefficients in the vector-field convention X(a)_n = i sum c_{n1 n2 n3 n} a1 conj(a2) a3.
// (The Hamiltonian is 1/4 sum c a1 conj(a2) a3 conj(a4).)
cd coeff_F(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p);
double coeff_Gprime(Freq n1, Freq n2, Freq n3, Freq n4);
double coeff_Gtilde(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p);

// D = 1/2 sum (|n|^2 + v_n)|a_n|^2 over the box
PolyHamiltonian build_D(const ModeIndex& box, const ConvPotential& V);
// G = 1/4 sum over all momentum tuples in the box
PolyHamiltonian build_G(const ModeIndex& box);
// quartic part after the gauge: -1/4 sum |a_n|^4 + 1/4 sum_{n1,n3 != n4}
PolyHamiltonian build_G_prime(const ModeIndex& box);
// resonant quartic part kept by the normal form (low self-terms + A0-type, high self-terms + A1-type)
PolyHamiltonian build_G_tilde(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p);
// generator: F = -i/rho on I', throws std::logic_error if some |F| > 4
PolyHamiltonian build_F(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p);

struct CancellationReport {
    std::map<TupleClass, std::size_t> counts;
    std::size_t monomials_checked = 0;
    double max_iprime_residual = 0;
    double max_mismatch = 0;
    bool self_terms_ok = true;
    bool passed = true;
    std::string first_offender;
    std::string text() const;
};

// Verifies G' + {D,F} = G~ monomial by monomial. `inject_fault` perturbs one F coefficient.
CancellationReport cancellation_check(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p,
                                      bool inject_fault = false);

// Cubic vector field restricted to a box, with its first and second derivatives.
class FieldPlan {
public:
    FieldPlan() = default;
    FieldPlan(ModeIndex box, CubicPlan plan) : box_(std::move(box)), plan_(std::move(plan)) {}

    const ModeIndex& box() const { return box_; }
    const CubicPlan& plan() const { return plan_; }
    std::size_t dim() const { return box_.size(); }

    void eval(const cd* y, cd* out) const;                            // out = X(y)
    void derivative(const cd* y, const cd* w, cd* out) const;         // out = DX(y)[w]
    void second(const cd* y, const cd* u, const cd* v, cd* out) const;  // out = D^2X(y)[u,v]

private:
    ModeIndex box_;
    CubicPlan plan_;
};

enum class QuarticKind { F, Gprime, Gtilde };
FieldPlan plan_from_coefficients(QuarticKind kind, const ModeIndex& box, const ConvPotential& V,
                                 const ResonanceParams& p);
// quartic terms only; the field is X_H = 2i dH/dconj(a)
FieldPlan plan_from_poly(const PolyHamiltonian& H, const ModeIndex& box);

struct LieOptions {
    int order = 0;  // 0 = numerical time-t flow, 1..3 = Lie series Id + tX + ...
    double t = 1.0;
    double radius = 0.5;  // admissible l1 radius of the input
    double rtol = 1e-13;
};

struct LieResult {
    AmplitudeField value;
    double gamma_minus_id_l1 = 0;
    double K = 0;  // ||Gamma(a) - a||_1 / ||a||_1^3
};

LieResult lie_transform(const AmplitudeField& state, const FieldPlan& XF, const LieOptions& opt = {});
LieResult lie_transform(const AmplitudeField& state, const PolyHamiltonian& F, const LieOptions& opt = {});

// y(t) and D Phi^{-t}(y(t)) w along the flow of X (integrated backwards from y).
void pullback(const FieldPlan& X, const std::vector<cd>& y, const std::vector<cd>& w, double t,
              std::vector<cd>& w_out, double rtol = 1e-13);

// X_{R}(a): degree >= 5 part of the transformed field, truncated to the box;
// quadrature = number of Gauss-Legendre nodes in the time integral.
AmplitudeField remainder_field(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                               const ResonanceParams& p, int quadrature = 8);
// Leading quintic part 1/2 (DX_A X_F - DX_F X_A), A = G' + G~.
AmplitudeField remainder_leading_field(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                                       const ResonanceParams& p);
double remainder_norm_probe(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                            const ResonanceParams& p);

}  // namespace nlsv
