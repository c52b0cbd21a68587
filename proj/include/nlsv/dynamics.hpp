#pragma once

#include <string>
#include <vector>

#include "nlsv/field.hpp"
#include "nlsv/kernels.hpp"
#include "nlsv/ode.hpp"
#include "nlsv/potential.hpp"

namespace nlsv {

// Sparse reference right-hand sides (triple loop over the support).
AmplitudeField full_rhs(const AmplitudeField& a, const ConvPotential& V, const ModeIndex& box);
AmplitudeField gauged_rhs(const AmplitudeField& r, const ConvPotential& V, const ModeIndex& box);

// D + G; throws if the imaginary part is not round-off.
double hamiltonian(const AmplitudeField& a, const ConvPotential& V);

AmplitudeField gauge_forward(const AmplitudeField& r, double t);
AmplitudeField gauge_backward(const AmplitudeField& a, double t);
AmplitudeField rotate_forward(const AmplitudeField& beta, const ConvPotential& V, double t);
AmplitudeField rotate_backward(const AmplitudeField& alpha, const ConvPotential& V, double t);

enum class Equation { Full, Gauged };

// Galerkin system on a fixed box: interaction plan precomputed once.
class BoxSystem {
public:
    BoxSystem(Equation eq, const ConvPotential& V, ModeIndex box);
    const ModeIndex& box() const { return box_; }
    Equation equation() const { return eq_; }
    std::size_t plan_size() const { return plan_.size(); }
    void rhs(double t, const cd* y, cd* dy) const;
    Rhs as_rhs() const;

private:
    Equation eq_;
    ModeIndex box_;
    std::vector<double> omega_;
    CubicPlan plan_;
};

Trajectory<AmplitudeField> integrate_field(const BoxSystem& sys, const AmplitudeField& y0, double t0, double t1,
                                           const std::vector<double>& samples, const OdeOptions& opts);

// CSV: t, mass, hamiltonian, sobolev_s, l1, then re_(x,y), im_(x,y) per tracked mode.
std::string trajectory_csv(const Trajectory<AmplitudeField>& tr, const ConvPotential& V, double s,
                           const std::vector<Freq>& tracked);

}  // namespace nlsv
